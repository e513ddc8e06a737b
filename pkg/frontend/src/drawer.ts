// Evidence drawer: the cited artifacts behind one selected claim, fetched
// per citation so one failing id degrades to a single error row.

import type { ApiClient } from "./api";
import { formatScore, SCORE_CLASS } from "./render";
import type { ClaimRecord } from "./types";

export const DRAWER_CLASS = "evidence-drawer";
export const ROW_CLASS = "evidence-row";
export const ERROR_ROW_CLASS = "evidence-row-error";

function field(className: string, value: string): HTMLElement {
  const span = document.createElement("span");
  span.className = className;
  span.textContent = value;
  return span;
}

export async function renderEvidenceDrawer(
  claim: ClaimRecord,
  api: Pick<ApiClient, "getArtifact">,
): Promise<HTMLElement> {
  const drawer = document.createElement("aside");
  drawer.className = DRAWER_CLASS;
  drawer.setAttribute("aria-label", "evidence for claim");

  const heading = document.createElement("p");
  heading.className = "drawer-claim";
  heading.textContent = claim.text;
  drawer.appendChild(heading);

  const score = field(SCORE_CLASS, formatScore(claim.support_score));
  score.setAttribute("aria-label", "support score");
  drawer.appendChild(score);

  const list = document.createElement("div");
  list.setAttribute("role", "list");
  drawer.appendChild(list);

  // Rows appear in ascending id order regardless of fetch completion order.
  const ordered = [...claim.citations].sort();
  const rows = await Promise.all(
    ordered.map(async (artifactId) => {
      try {
        const artifact = await api.getArtifact(artifactId);
        const row = document.createElement("div");
        row.className = ROW_CLASS;
        row.setAttribute("role", "listitem");
        row.dataset.artifactId = artifact.id;
        row.appendChild(field("evidence-id", artifact.id));
        row.appendChild(field("evidence-channel", artifact.channel));
        row.appendChild(field("evidence-timestamp", artifact.created_at));
        row.appendChild(field("evidence-text", artifact.text));
        if (artifact.media_transcript) {
          row.appendChild(
            field("evidence-transcript", artifact.media_transcript),
          );
        }
        return row;
      } catch (error) {
        const row = document.createElement("div");
        row.className = `${ROW_CLASS} ${ERROR_ROW_CLASS}`;
        row.setAttribute("role", "listitem");
        row.dataset.artifactId = artifactId;
        row.appendChild(field("evidence-id", artifactId));
        const message =
          error instanceof Error ? error.message : String(error);
        row.appendChild(field("evidence-error", message));
        return row;
      }
    }),
  );
  for (const row of rows) list.appendChild(row);
  return drawer;
}
