// Pure DOM builders for transcript turns. Every text node placed here
// comes from a gateway payload field: claim text, citation ids, support
// scores, abstain notes, the user's own message. Styling and labels are
// carried by classes and aria attributes, never by synthesized text.

import type { ClaimRecord, ResponseRecord, TurnRecord } from "./types";

export const CLAIM_CLASS = "claim-bubble";
export const ANSWER_CLASS = "answer-turn";
export const ABSTAIN_CLASS = "abstain-banner";
export const CHIP_CLASS = "citation-chip";
export const SCORE_CLASS = "score-badge";

export function formatScore(score: number): string {
  return score.toFixed(2);
}

export function citationChip(
  artifactId: string,
  onOpen?: (artifactId: string) => void,
): HTMLElement {
  const chip = document.createElement("button");
  chip.type = "button";
  chip.className = CHIP_CLASS;
  chip.dataset.artifactId = artifactId;
  chip.setAttribute("aria-label", "open evidence");
  chip.textContent = artifactId;
  if (onOpen) {
    chip.addEventListener("click", () => onOpen(artifactId));
  }
  return chip;
}

export function renderClaim(
  claim: ClaimRecord,
  onSelect?: (claim: ClaimRecord) => void,
): HTMLElement {
  const row = document.createElement("div");
  row.className = CLAIM_CLASS;
  row.setAttribute("role", "listitem");

  const text = document.createElement("p");
  text.className = "claim-text";
  text.textContent = claim.text;
  row.appendChild(text);

  const meta = document.createElement("div");
  meta.className = "claim-meta";
  for (const artifactId of claim.citations) {
    meta.appendChild(citationChip(artifactId));
  }
  const score = document.createElement("span");
  score.className = SCORE_CLASS;
  score.setAttribute("aria-label", "support score");
  score.textContent = formatScore(claim.support_score);
  meta.appendChild(score);
  row.appendChild(meta);

  if (onSelect) {
    row.addEventListener("click", () => onSelect(claim));
  }
  return row;
}

export function renderResponse(
  response: ResponseRecord,
  onSelect?: (claim: ClaimRecord) => void,
): HTMLElement {
  if (response.kind === "abstained") {
    const banner = document.createElement("div");
    banner.className = ABSTAIN_CLASS;
    banner.setAttribute("role", "status");
    const note = document.createElement("p");
    note.textContent = response.abstain_note ?? "";
    banner.appendChild(note);
    return banner;
  }
  const wrap = document.createElement("div");
  wrap.className = ANSWER_CLASS;
  wrap.setAttribute("role", "list");
  for (const claim of response.claims) {
    wrap.appendChild(renderClaim(claim, onSelect));
  }
  return wrap;
}

export function renderTurn(
  turn: TurnRecord,
  onSelect?: (claim: ClaimRecord) => void,
): HTMLElement {
  const element = document.createElement("article");
  element.className = "turn";
  element.dataset.turnIndex = String(turn.turn_index);

  const question = document.createElement("div");
  question.className = "user-bubble";
  question.textContent = turn.message;
  element.appendChild(question);

  element.appendChild(renderResponse(turn.response, onSelect));
  return element;
}

/** Malformed payloads must not reach the transcript; validate first. */
export function isTurnRecord(value: unknown): value is TurnRecord {
  if (typeof value !== "object" || value === null) return false;
  const turn = value as Record<string, unknown>;
  if (typeof turn.turn_index !== "number") return false;
  if (typeof turn.message !== "string") return false;
  const response = turn.response as Record<string, unknown> | undefined;
  if (!response || typeof response !== "object") return false;
  if (response.kind !== "answered" && response.kind !== "abstained") {
    return false;
  }
  if (!Array.isArray(response.claims)) return false;
  if (response.kind === "abstained" && response.claims.length > 0) return false;
  if (
    response.kind === "abstained" &&
    typeof response.abstain_note !== "string"
  ) {
    return false;
  }
  for (const claim of response.claims) {
    if (typeof claim?.text !== "string") return false;
    if (!Array.isArray(claim?.citations) || claim.citations.length === 0) {
      return false;
    }
    if (typeof claim?.support_score !== "number") return false;
  }
  return true;
}
