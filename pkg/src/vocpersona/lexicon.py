"""Fixed sentiment lexicon for reaction stance scoring.

Single words with +1/-1 polarity. Deterministic by construction; a
model-based stance scorer can replace this behind the same interface.
"""

from __future__ import annotations

from .text import tokens

POSITIVE_WORDS = frozenset("""
amazing awesome beautiful best better bonus breeze brilliant calm capable
celebrate charming cheerful clean clear clever comfortable compelling
convenient cool correct crisp delight delighted delightful dependable
durable eager easy effective efficient effortless elegant enjoy enjoyable
enjoyed excellent excited exciting exceptional fabulous fantastic fast
favorite fine flawless flexible fluid fresh friendly fun generous genius
glad good gorgeous grateful great handy happy helpful ideal impressed
impressive improved incredible innovative instant intuitive inviting joy
keen lightweight likable like liked love loved lovely loyal magical
marvelous modern neat nice nifty outstanding painless pleasant pleased
pleasing polished positive powerful praise precise premium pretty prompt
quick quiet recommend refined refreshing reliable remarkable responsive
rewarding rich right robust satisfied satisfying seamless secure sharp
shiny simple sleek smart smooth snappy solid spacious spectacular speedy
splendid stable steady strong stunning sturdy stylish succeed success
successful super superb superior supportive sweet terrific thank thanks
thrilled tidy timely top tremendous trust trusted trustworthy useful
valuable versatile vibrant warm welcome well win winner wonderful worth
worthwhile wow accurate adore affordable appealing attractive balanced
beloved bright classy comfy competent consistent divine dreamy energetic
engaging enthusiastic exquisite faithful fancy fantastically fitting
generously gentle graceful grand heavenly honest hooked immaculate
inspired inspiring legendary lively lovable masterful mighty perfect
perfectly phenomenal pleasurable professional radiant
""".split())

NEGATIVE_WORDS = frozenset("""
abysmal afraid aggravating angry annoyed annoying appalling atrocious awful
bad barely bland breaks broke broken buggy bugs bulky cheap chaotic clumsy
complain complained complaint confused confusing cracked crash crashed
crashes crummy cumbersome damaged dead defect defective delayed delays
denied die died dies dim dirty disappointed disappointing disappointment
dislike dismal downgrade dreadful drain drained drains dropped dull
error errors expensive fail failed failing fails failure faulty flaky
flawed flicker flimsy fragile freeze freezes frozen frustrated frustrating
garbage glitch glitches glitchy grim gross hang hangs hard harsh hate
hated horrible hostile inaccurate inconsistent incorrect inferior insecure
issue issues jam jammed junk lag laggy lags late lemon lost loud lousy
mediocre mess messy miserable misleading missing mistake mistakes noisy
nightmare overheat overheats overpriced painful pathetic poor poorly
problem problems refund refused regret reject rejected return returned
ridiculous rough ruined sad scam scratched shoddy slow sluggish sorry
stale stall stalled struggle struggled stuck stutter subpar terrible
trouble ugly unacceptable unclear uncomfortable unhappy unreliable
unresponsive unstable unusable upset useless waste wasted weak worn worse
worst wrong absurd awkward botched careless corrupt crooked cringe
deceptive deficient disaster disastrous disgusting dishonest disorganized
dreary fake feeble filthy finicky grating grimy hassle hideous hopeless
impossible inadequate inept infuriating insulting irritating janky
laughable limp moldy obsolete offensive outdated overrated
""".split())


def text_polarity(text: str) -> float:
    """Mean polarity over matched lexicon words; 0.0 when none match."""
    matched = [
        1.0 if token in POSITIVE_WORDS else -1.0
        for token in tokens(text)
        if token in POSITIVE_WORDS or token in NEGATIVE_WORDS
    ]
    if not matched:
        return 0.0
    return sum(matched) / len(matched)
