// Wire types mirroring the service's JSON payloads.

export type VerdictKind = "PROHIBITS" | "PERMITS" | "DEMANDS" | "TBD";

export interface PathStep {
  prompt: string;
  answer: string;
}

export interface NodeView {
  kind: "question" | "xor";
  prompt: string;
  labels: string[];
}

export interface VerdictView {
  kind: VerdictKind;
  rationale: string;
  citations: string[];
}

export interface SessionState {
  version: string;
  id: string;
  tree: string;
  path: PathStep[];
  provisional: boolean;
  node?: NodeView;
  verdict?: VerdictView;
}

export interface GuidelineInfo {
  name: string;
  subclasses: string[];
}

export interface OutcomeView {
  tree: string;
  verdict: VerdictView;
  provisional: boolean;
  transcript: PathStep[];
  obligations: string[];
}

export interface ReportView {
  version: string;
  outcomes: OutcomeView[];
  overall: VerdictKind;
  obligations: string[];
}
