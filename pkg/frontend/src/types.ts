// Wire types mirroring the /v1 gateway payloads. The console renders
// these verbatim and never synthesizes content of its own.

export interface PersonaRecord {
  persona_id: string;
  name: string;
  cluster_ids: string[];
  summary_terms: string[];
  user_count: number;
  message_count: number;
  coverage: Record<string, number>;
  gaps: string[];
}

export interface ClaimRecord {
  text: string;
  citations: string[];
  support_score: number;
}

export interface ResponseRecord {
  kind: "answered" | "abstained";
  claims: ClaimRecord[];
  abstain_note: string | null;
}

export interface TurnRecord {
  turn_index: number;
  message: string;
  response: ResponseRecord;
  bundle: { ids_scores: [string, number][] };
}

export interface ArtifactRecord {
  id: string;
  author_id: string;
  channel: string;
  created_at: string;
  text: string;
  media_transcript?: string;
  lang?: string;
}

export interface FacetRecord {
  facet: string;
  stance: "supportive" | "critical" | "mixed" | "no_evidence";
  polarity: number;
  citations: string[];
}

export interface ReactionReportRecord {
  persona_id: string;
  stimulus_kind: string;
  stimulus_title: string;
  facets: FacetRecord[];
  overall_note: string;
}

export interface SummaryRecord {
  session_id: string;
  persona_id: string;
  turns: {
    turn_index: number;
    question: string;
    kind: string;
    claims: ClaimRecord[];
    abstain_note: string | null;
  }[];
  sources: string[];
}

export interface SessionRecord {
  session_id: string;
  persona_id: string;
  mode: string;
}

export interface ErrorBody {
  code: string;
  message: string;
}

export const STIMULUS_KINDS = [
  "feature_idea",
  "mockup_text",
  "problem_statement",
  "social_post",
  "landing_copy",
] as const;

export type StimulusKind = (typeof STIMULUS_KINDS)[number];
