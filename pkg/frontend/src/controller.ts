import { ApiError, WalkthroughApi } from "./api.js";
import { GuidelineInfo, PathStep, ReportView, SessionState } from "./types.js";

// The controller mirrors server state only: the breadcrumb is the server's
// path, verdict strings come from payloads verbatim, and nothing is decided
// locally. One tree is walked at a time; completed sessions are kept so the
// summary screen can ask the service for an aggregated report.

export interface CompletedWalk {
  tree: string;
  sessionId: string;
}

export type Screen =
  | { kind: "loading" }
  | { kind: "picker"; guidelines: GuidelineInfo[]; completed: CompletedWalk[] }
  | { kind: "walk"; state: SessionState; inlineError: string | null }
  | { kind: "summary"; report: ReportView; completed: CompletedWalk[] }
  | { kind: "failure"; message: string };

export class WalkthroughController {
  private current: Screen = { kind: "loading" };
  private listeners: Array<(screen: Screen) => void> = [];
  private completed: CompletedWalk[] = [];
  private lastAction: (() => Promise<void>) | null = null;

  constructor(private readonly api: WalkthroughApi) {}

  get screen(): Screen {
    return this.current;
  }

  get breadcrumb(): PathStep[] {
    return this.current.kind === "walk" ? this.current.state.path : [];
  }

  subscribe(listener: (screen: Screen) => void): void {
    this.listeners.push(listener);
    listener(this.current);
  }

  private setScreen(screen: Screen): void {
    this.current = screen;
    for (const listener of this.listeners) {
      listener(screen);
    }
  }

  /** Run an action; API failures become a retryable failure screen. */
  private async guarded(action: () => Promise<void>): Promise<void> {
    this.lastAction = action;
    try {
      await action();
    } catch (error) {
      if (error instanceof ApiError && error.status === 422 && this.current.kind === "walk") {
        // invalid answer: keep the state, surface the message inline
        this.setScreen({ ...this.current, inlineError: error.inlineMessage });
        return;
      }
      this.setScreen({ kind: "failure", message: String(error) });
    }
  }

  async retry(): Promise<void> {
    if (this.lastAction) {
      await this.guarded(this.lastAction);
    }
  }

  async start(): Promise<void> {
    await this.guarded(async () => {
      const guidelines = await this.api.listGuidelines();
      this.setScreen({ kind: "picker", guidelines, completed: this.completed });
    });
  }

  async pick(tree: string): Promise<void> {
    await this.guarded(async () => {
      const state = await this.api.createSession(tree);
      this.setScreen({ kind: "walk", state, inlineError: null });
    });
  }

  async answer(label: string): Promise<void> {
    if (this.current.kind !== "walk" || this.current.state.verdict) {
      return; // terminal or not walking: controls are disabled, send nothing
    }
    const id = this.current.state.id;
    await this.guarded(async () => {
      const state = await this.api.answer(id, label);
      this.setScreen({ kind: "walk", state, inlineError: null });
    });
  }

  async undo(): Promise<void> {
    if (this.current.kind !== "walk" || this.current.state.path.length === 0) {
      return;
    }
    const id = this.current.state.id;
    await this.guarded(async () => {
      const state = await this.api.undo(id);
      this.setScreen({ kind: "walk", state, inlineError: null });
    });
  }

  /** Refetch the authoritative state for the active walk. */
  async refresh(): Promise<void> {
    if (this.current.kind !== "walk") {
      return;
    }
    const id = this.current.state.id;
    await this.guarded(async () => {
      const state = await this.api.getSession(id);
      this.setScreen({ kind: "walk", state, inlineError: null });
    });
  }

  /** Record a finished walk and return to the picker. */
  async finishWalk(): Promise<void> {
    if (this.current.kind === "walk" && this.current.state.verdict) {
      const { tree, id } = this.current.state;
      this.completed = this.completed
        .filter((entry) => entry.tree !== tree)
        .concat({ tree, sessionId: id });
    }
    await this.start();
  }

  async showSummary(): Promise<void> {
    await this.guarded(async () => {
      const report = await this.api.report(this.completed.map((entry) => entry.sessionId));
      this.setScreen({ kind: "summary", report, completed: this.completed });
    });
  }
}
