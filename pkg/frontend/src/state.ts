// View state: an append-only transcript mirror plus UI selection flags.
// The gateway transcript is the single source of truth; this mirror only
// accumulates what the server returned.

import type { PersonaRecord, TurnRecord } from "./types";

export interface ViewState {
  persona: PersonaRecord | null;
  sessionId: string | null;
  transcript: TurnRecord[];
  selectedClaim: { turnIndex: number; claimIndex: number } | null;
  pending: boolean;
}

type Listener = (state: ViewState) => void;

export class Store {
  private state: ViewState = {
    persona: null,
    sessionId: null,
    transcript: [],
    selectedClaim: null,
    pending: false,
  };
  private listeners: Listener[] = [];

  get(): ViewState {
    return this.state;
  }

  subscribe(listener: Listener): () => void {
    this.listeners.push(listener);
    return () => {
      this.listeners = this.listeners.filter((l) => l !== listener);
    };
  }

  private emit() {
    for (const listener of this.listeners) listener(this.state);
  }

  setPersona(persona: PersonaRecord, sessionId: string) {
    this.state = {
      persona,
      sessionId,
      transcript: [],
      selectedClaim: null,
      pending: false,
    };
    this.emit();
  }

  setPending(pending: boolean) {
    this.state = { ...this.state, pending };
    this.emit();
  }

  appendTurn(turn: TurnRecord) {
    // Append-only and consistent with server turn indices: a turn that
    // does not extend the mirror is rejected rather than spliced in.
    const last = this.state.transcript[this.state.transcript.length - 1];
    if (last !== undefined && turn.turn_index <= last.turn_index) {
      throw new Error(
        `turn index ${turn.turn_index} does not extend the transcript`,
      );
    }
    this.state = {
      ...this.state,
      transcript: [...this.state.transcript, turn],
    };
    this.emit();
  }

  selectClaim(turnIndex: number, claimIndex: number) {
    // Exactly one claim selectable at a time.
    this.state = {
      ...this.state,
      selectedClaim: { turnIndex, claimIndex },
    };
    this.emit();
  }

  clearSelection() {
    this.state = { ...this.state, selectedClaim: null };
    this.emit();
  }
}
