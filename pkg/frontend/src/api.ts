// Typed client for the documented /v1 API. Fetch is injectable so
// component tests can intercept every request.

import type {
  ArtifactRecord,
  PersonaRecord,
  ReactionReportRecord,
  SessionRecord,
  StimulusKind,
  SummaryRecord,
  TurnRecord,
} from "./types";

export class ApiError extends Error {
  constructor(
    public status: number,
    public code: string,
    message: string,
  ) {
    super(message);
  }
}

type Fetcher = typeof fetch;

export class ApiClient {
  constructor(
    private base = "",
    private fetcher: Fetcher = (...args) => fetch(...args),
  ) {}

  private async request<T>(path: string, init?: RequestInit): Promise<T> {
    const reply = await this.fetcher(`${this.base}${path}`, init);
    const text = await reply.text();
    if (!reply.ok) {
      let code = "error";
      let message = text || reply.statusText;
      try {
        const body = JSON.parse(text);
        code = body.code ?? code;
        message = body.message ?? message;
      } catch {
        // Non-JSON error body; keep raw text.
      }
      throw new ApiError(reply.status, code, message);
    }
    return JSON.parse(text) as T;
  }

  private post<T>(path: string, body: unknown): Promise<T> {
    return this.request<T>(path, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(body),
    });
  }

  listPersonas(): Promise<PersonaRecord[]> {
    return this.request<{ personas: PersonaRecord[] }>("/v1/personas").then(
      (body) => body.personas,
    );
  }

  getPersona(personaId: string): Promise<PersonaRecord> {
    return this.request(`/v1/personas/${encodeURIComponent(personaId)}`);
  }

  getProvenanceMarkdown(personaId: string): Promise<string> {
    return this.fetcher(
      `${this.base}/v1/personas/${encodeURIComponent(personaId)}/provenance?format=markdown`,
    ).then(async (reply) => {
      if (!reply.ok) {
        throw new ApiError(reply.status, "error", await reply.text());
      }
      return reply.text();
    });
  }

  openSession(personaId: string, mode = "interview"): Promise<SessionRecord> {
    return this.post("/v1/sessions", { persona_id: personaId, mode });
  }

  sendMessage(sessionId: string, text: string): Promise<TurnRecord> {
    return this.post(
      `/v1/sessions/${encodeURIComponent(sessionId)}/messages`,
      { text },
    );
  }

  sendStimulus(
    sessionId: string,
    stimulus: { kind: StimulusKind; title: string; content: string },
  ): Promise<ReactionReportRecord> {
    return this.post(
      `/v1/sessions/${encodeURIComponent(sessionId)}/reactions`,
      { stimulus },
    );
  }

  getSummary(sessionId: string): Promise<SummaryRecord> {
    return this.request(
      `/v1/sessions/${encodeURIComponent(sessionId)}/summary`,
    );
  }

  getArtifact(artifactId: string): Promise<ArtifactRecord> {
    return this.request(`/v1/artifacts/${encodeURIComponent(artifactId)}`);
  }
}
