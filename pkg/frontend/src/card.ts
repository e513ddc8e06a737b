// Provenance card viewer: the gateway's markdown rendering shown
// verbatim, one canonical representation everywhere.

export const CARD_VIEW_CLASS = "card-view";

export function renderCardView(markdown: string): HTMLElement {
  const view = document.createElement("pre");
  view.className = CARD_VIEW_CLASS;
  view.setAttribute("aria-label", "persona provenance card");
  view.textContent = markdown;
  return view;
}
