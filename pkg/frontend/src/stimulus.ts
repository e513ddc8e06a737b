// Stimulus submission and per-facet reaction cards.

import type { FacetRecord, ReactionReportRecord } from "./types";
import { citationChip } from "./render";

export const FACET_CLASS = "facet-card";
export const NO_EVIDENCE_CLASS = "facet-no-evidence";

export function validateStimulusForm(form: {
  kind: string;
  content: string;
}): boolean {
  return form.kind.length > 0 && form.content.trim().length > 0;
}

export function renderFacet(facet: FacetRecord): HTMLElement {
  const card = document.createElement("div");
  card.className =
    facet.stance === "no_evidence"
      ? `${FACET_CLASS} ${NO_EVIDENCE_CLASS}`
      : FACET_CLASS;
  card.dataset.stance = facet.stance;

  const text = document.createElement("p");
  text.className = "facet-text";
  text.textContent = facet.facet;
  card.appendChild(text);

  const stance = document.createElement("span");
  stance.className = `stance stance-${facet.stance}`;
  stance.textContent = facet.stance;
  card.appendChild(stance);

  const polarity = document.createElement("span");
  polarity.className = "facet-polarity";
  polarity.setAttribute("aria-label", "polarity");
  polarity.textContent = facet.polarity.toFixed(2);
  card.appendChild(polarity);

  const chips = document.createElement("div");
  chips.className = "facet-citations";
  for (const artifactId of facet.citations) {
    chips.appendChild(citationChip(artifactId));
  }
  card.appendChild(chips);
  return card;
}

export function renderReactionReport(
  report: ReactionReportRecord,
): HTMLElement {
  const wrap = document.createElement("section");
  wrap.className = "reaction-report";

  // Facet cards in stimulus input order.
  for (const facet of report.facets) {
    wrap.appendChild(renderFacet(facet));
  }

  const note = document.createElement("p");
  note.className = "reaction-note";
  note.textContent = report.overall_note;
  wrap.appendChild(note);
  return wrap;
}
