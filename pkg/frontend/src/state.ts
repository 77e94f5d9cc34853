// Session state for the feedback loop. Pure data + transitions so the
// whole flow is testable against a real or stubbed client; main.ts only
// paints whatever this says.
//
// The invariant that matters: nothing is written until accept(), and
// accept() writes exactly what the preview showed.

import { ApiClient, type RepairResponse } from "./api";
import { parseDot, type ParsedGraph } from "./dot";
import { diffGraphs, type GraphDiff } from "./diff";

export interface Preview {
  edit: string;
  repaired: ParsedGraph;
  repairedDot: string;
  diff: GraphDiff;
  feedbackSource: RepairResponse["feedback_source"];
  corrector: string;
  note: string | null;
  /** set when the service pulled feedback from memory */
  retrieved: { id: number; similarity: number; feedback: string } | null;
}

export interface SessionState {
  scriptDot: string | null;
  script: ParsedGraph | null;
  feedbackText: string;
  preview: Preview | null;
  memorySize: number;
  error: string | null;
  busy: boolean;
}

export class Session {
  state: SessionState = {
    scriptDot: null,
    script: null,
    feedbackText: "",
    preview: null,
    memorySize: 0,
    error: null,
    busy: false,
  };

  constructor(
    private api: ApiClient,
    private onChange: (s: SessionState) => void = () => {},
  ) {}

  private emit() {
    this.onChange(this.state);
  }

  async refreshMemorySize(): Promise<number> {
    const health = await this.api.healthz();
    this.state.memorySize = health.memory_size;
    this.emit();
    return health.memory_size;
  }

  /** Load a script; parse errors land in state.error, not exceptions. */
  loadScript(dot: string): boolean {
    this.state.preview = null;
    this.state.error = null;
    this.state.feedbackText = "";
    try {
      this.state.script = parseDot(dot);
      this.state.scriptDot = dot;
      this.emit();
      return true;
    } catch (err) {
      this.state.script = null;
      this.state.scriptDot = null;
      this.state.error = err instanceof Error ? err.message : String(err);
      this.emit();
      return false;
    }
  }

  setFeedback(text: string) {
    this.state.feedbackText = text;
    this.emit();
  }

  /**
   * Ask the service for a repair. With empty feedback the service falls
   * back to memory lookup; the similarity badge comes from its answer.
   */
  async requestPreview(corrector?: string): Promise<Preview> {
    if (!this.state.scriptDot) throw new Error("no script loaded");
    this.state.busy = true;
    this.state.error = null;
    this.emit();
    try {
      const fb = this.state.feedbackText.trim();
      const resp = await this.api.repair(this.state.scriptDot, fb || undefined, corrector);
      let retrieved: Preview["retrieved"] = null;
      if (resp.feedback_source === "memory" && resp.retrieved_id !== null) {
        const record = await this.api.memoryDetail(resp.retrieved_id);
        retrieved = {
          id: resp.retrieved_id,
          similarity: resp.similarity ?? 0,
          feedback: record.feedback,
        };
      }
      const repaired = parseDot(resp.repaired_dot);
      const preview: Preview = {
        edit: resp.edit,
        repaired,
        repairedDot: resp.repaired_dot,
        diff: diffGraphs(this.state.script!, repaired),
        feedbackSource: resp.feedback_source,
        corrector: resp.corrector,
        note: resp.note,
        retrieved,
      };
      this.state.preview = preview;
      return preview;
    } catch (err) {
      this.state.error = err instanceof Error ? err.message : String(err);
      throw err;
    } finally {
      this.state.busy = false;
      this.emit();
    }
  }

  /** The feedback the preview was actually based on. */
  effectiveFeedback(): string | null {
    const typed = this.state.feedbackText.trim();
    if (typed) return typed;
    return this.state.preview?.retrieved?.feedback ?? null;
  }

  /** Throw away the preview so the user can rephrase; no write happened. */
  reject() {
    this.state.preview = null;
    this.emit();
  }

  /** Bank the previewed (feedback, edit) pair. Returns the new record id. */
  async accept(): Promise<number> {
    const preview = this.state.preview;
    if (!preview) throw new Error("nothing to accept");
    const feedback = this.effectiveFeedback();
    if (!feedback) throw new Error("no feedback to store");
    this.state.busy = true;
    this.emit();
    try {
      const resp = await this.api.writeFeedback(
        this.state.scriptDot!,
        feedback,
        preview.edit === "noop" ? undefined : preview.edit,
      );
      await this.refreshMemorySize();
      this.state.preview = null;
      this.state.feedbackText = "";
      return resp.record_id;
    } catch (err) {
      this.state.error = err instanceof Error ? err.message : String(err);
      throw err;
    } finally {
      this.state.busy = false;
      this.emit();
    }
  }
}
