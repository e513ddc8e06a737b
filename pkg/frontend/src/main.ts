// App bootstrap: persona picker, interview composer, evidence drawer,
// provenance card viewer, and the reaction form, all against /v1.

import { ApiClient, ApiError } from "./api";
import { renderCardView } from "./card";
import { renderEvidenceDrawer } from "./drawer";
import { isTurnRecord, renderTurn } from "./render";
import { Store } from "./state";
import { renderReactionReport, validateStimulusForm } from "./stimulus";
import type { ClaimRecord, PersonaRecord, StimulusKind } from "./types";
import { STIMULUS_KINDS } from "./types";

const api = new ApiClient();
const store = new Store();

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing element #${id}`);
  return node as T;
}

function toast(message: string) {
  const host = el<HTMLDivElement>("toasts");
  const note = document.createElement("div");
  note.className = "toast";
  note.textContent = message;
  host.appendChild(note);
  setTimeout(() => note.remove(), 6000);
}

function sessionIdFromUrl(): string | null {
  return new URLSearchParams(window.location.search).get("session");
}

function pushSessionUrl(sessionId: string) {
  const url = new URL(window.location.href);
  url.searchParams.set("session", sessionId);
  history.replaceState(null, "", url.toString());
}

function renderPersonaHeader(persona: PersonaRecord) {
  const header = el<HTMLDivElement>("persona-header");
  header.replaceChildren();
  const name = document.createElement("h2");
  name.textContent = persona.name;
  header.appendChild(name);
  const terms = document.createElement("p");
  terms.className = "summary-terms";
  terms.textContent = persona.summary_terms.join(", ");
  header.appendChild(terms);
  const metrics = document.createElement("p");
  metrics.className = "segment-metrics";
  metrics.textContent = `${persona.user_count} users · ${persona.message_count} messages`;
  header.appendChild(metrics);
}

async function openEvidence(claim: ClaimRecord) {
  const host = el<HTMLDivElement>("drawer-host");
  host.replaceChildren();
  host.appendChild(await renderEvidenceDrawer(claim, api));
  host.classList.add("open");
}

function renderTranscript() {
  const { transcript } = store.get();
  const host = el<HTMLDivElement>("transcript");
  host.replaceChildren();
  for (const turn of transcript) {
    host.appendChild(renderTurn(turn, (claim) => void openEvidence(claim)));
  }
  host.scrollTop = host.scrollHeight;
}

async function selectPersona(persona: PersonaRecord) {
  const session = await api.openSession(persona.persona_id);
  store.setPersona(persona, session.session_id);
  pushSessionUrl(session.session_id);
  renderPersonaHeader(persona);
  renderTranscript();
  el<HTMLDivElement>("card-host").replaceChildren();
}

async function loadPersonas() {
  const personas = await api.listPersonas();
  const list = el<HTMLUListElement>("persona-list");
  list.replaceChildren();
  for (const persona of personas) {
    const item = document.createElement("li");
    const button = document.createElement("button");
    button.type = "button";
    button.textContent = persona.name;
    button.addEventListener("click", () => void selectPersona(persona));
    item.appendChild(button);
    list.appendChild(item);
  }
  if (personas.length && !sessionIdFromUrl()) {
    await selectPersona(personas[0]);
  }
}

async function sendMessage() {
  const state = store.get();
  const input = el<HTMLTextAreaElement>("composer-input");
  const text = input.value.trim();
  if (!text || !state.sessionId || state.pending) return;
  store.setPending(true);
  el<HTMLButtonElement>("composer-send").disabled = true;
  try {
    const turn = await api.sendMessage(state.sessionId, text);
    if (!isTurnRecord(turn)) {
      toast("malformed response payload; turn not recorded");
      return;
    }
    store.appendTurn(turn);
    renderTranscript();
    input.value = "";
  } catch (error) {
    toast(error instanceof ApiError ? `${error.code}: ${error.message}`
                                    : String(error));
  } finally {
    store.setPending(false);
    el<HTMLButtonElement>("composer-send").disabled = false;
  }
}

async function showCard() {
  const state = store.get();
  if (!state.persona) return;
  try {
    const markdown = await api.getProvenanceMarkdown(state.persona.persona_id);
    const host = el<HTMLDivElement>("card-host");
    host.replaceChildren(renderCardView(markdown));
  } catch (error) {
    toast(String(error));
  }
}

async function submitStimulus() {
  const state = store.get();
  if (!state.sessionId || state.pending) return;
  const kind = el<HTMLSelectElement>("stimulus-kind").value as StimulusKind;
  const title = el<HTMLInputElement>("stimulus-title").value;
  const content = el<HTMLTextAreaElement>("stimulus-content").value;
  if (!validateStimulusForm({ kind, content })) return;
  store.setPending(true);
  try {
    const report = await api.sendStimulus(state.sessionId, {
      kind,
      title,
      content,
    });
    const host = el<HTMLDivElement>("reaction-host");
    host.replaceChildren(renderReactionReport(report));
  } catch (error) {
    toast(error instanceof ApiError ? `${error.code}: ${error.message}`
                                    : String(error));
  } finally {
    store.setPending(false);
  }
}

function wireStimulusValidation() {
  const content = el<HTMLTextAreaElement>("stimulus-content");
  const submit = el<HTMLButtonElement>("stimulus-submit");
  const update = () => {
    submit.disabled = !validateStimulusForm({
      kind: el<HTMLSelectElement>("stimulus-kind").value,
      content: content.value,
    });
  };
  content.addEventListener("input", update);
  update();
}

export function bootstrap() {
  const kindSelect = el<HTMLSelectElement>("stimulus-kind");
  for (const kind of STIMULUS_KINDS) {
    const option = document.createElement("option");
    option.value = kind;
    option.textContent = kind;
    kindSelect.appendChild(option);
  }
  el<HTMLButtonElement>("composer-send").addEventListener("click", () =>
    void sendMessage(),
  );
  el<HTMLTextAreaElement>("composer-input").addEventListener(
    "keydown",
    (event) => {
      if (event.key === "Enter" && !event.shiftKey) {
        event.preventDefault();
        void sendMessage();
      }
    },
  );
  el<HTMLButtonElement>("card-button").addEventListener("click", () =>
    void showCard(),
  );
  el<HTMLButtonElement>("stimulus-submit").addEventListener("click", () =>
    void submitStimulus(),
  );
  wireStimulusValidation();
  void loadPersonas().catch((error) => toast(String(error)));
}

if (typeof document !== "undefined" && document.getElementById("app")) {
  bootstrap();
}
