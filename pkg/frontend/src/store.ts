import {
  ApiError,
  createSession,
  fetchOptions,
  fetchSession,
  postOutcome,
} from "./api.js";
import type {
  FieldError,
  OptionsPayload,
  SessionView,
  SetupInputs,
} from "./types.js";

export interface SetupState {
  phase: "setup";
  pending: boolean;
  error: FieldError | null;
}

export interface SessionState {
  phase: "session";
  view: SessionView;
  options: OptionsPayload | null;
  selectedStake: number | null; // what-if slider position; null = recommended
  pending: boolean; // an outcome post is in flight; entry is disabled
  error: string | null;
}

export type State = SetupState | SessionState;

type Listener = (state: State) => void;

function parseSetup(inputs: SetupInputs):
  | { ok: true; p: string; N: number; T: number; capital: number }
  | { ok: false; error: FieldError } {
  const p = inputs.p.trim();
  if (!/^\d+(\/\d+)?$|^\d*\.\d+$/.test(p)) {
    return { ok: false, error: { field: "p", message: "enter p as a fraction like 3/5 or a decimal" } };
  }
  const fields: Array<[keyof SetupInputs, string]> = [
    ["goal", "goal"],
    ["horizon", "horizon"],
    ["capital", "capital"],
  ];
  const numbers: Record<string, number> = {};
  for (const [key, name] of fields) {
    const value = Number(inputs[key]);
    if (!Number.isInteger(value) || value < 1) {
      return { ok: false, error: { field: name, message: "must be a positive integer" } };
    }
    numbers[name] = value;
  }
  return { ok: true, p, N: numbers.goal, T: numbers.horizon, capital: numbers.capital };
}

export class AdvisorStore {
  private state: State = { phase: "setup", pending: false, error: null };
  private listeners: Listener[] = [];

  getState(): State {
    return this.state;
  }

  subscribe(listener: Listener): () => void {
    this.listeners.push(listener);
    return () => {
      this.listeners = this.listeners.filter((l) => l !== listener);
    };
  }

  private set(state: State): void {
    this.state = state;
    for (const listener of this.listeners) {
      listener(state);
    }
  }

  async startSession(inputs: SetupInputs): Promise<void> {
    if (this.state.phase !== "setup" || this.state.pending) return;
    const parsed = parseSetup(inputs);
    if (!parsed.ok) {
      this.set({ phase: "setup", pending: false, error: parsed.error });
      return;
    }
    this.set({ phase: "setup", pending: true, error: null });
    try {
      const view = await createSession({
        p: parsed.p,
        N: parsed.N,
        T: parsed.T,
        capital: parsed.capital,
      });
      this.set({
        phase: "session",
        view,
        options: null,
        selectedStake: null,
        pending: false,
        error: null,
      });
      await this.refreshOptions();
    } catch (err) {
      const error: FieldError =
        err instanceof ApiError
          ? { field: err.field ?? "form", message: err.message }
          : { field: "form", message: String(err) };
      this.set({ phase: "setup", pending: false, error });
    }
  }

  async refreshOptions(): Promise<void> {
    const s = this.state;
    if (s.phase !== "session" || s.view.status !== "active") return;
    try {
      const options = await fetchOptions(s.view.id);
      this.set({ ...s, options, selectedStake: null });
    } catch (err) {
      if (err instanceof ApiError && err.status === 409) {
        // stale: the session turned terminal elsewhere; refetch the view
        const view = await fetchSession(s.view.id);
        this.set({ ...s, view, options: null });
        return;
      }
      this.set({ ...s, error: String(err) });
    }
  }

  selectStake(stake: number): void {
    const s = this.state;
    if (s.phase !== "session" || s.pending) return;
    this.set({ ...s, selectedStake: stake });
  }

  async submitOutcome(result: "win" | "lose", stakeOverride?: number): Promise<void> {
    const s = this.state;
    if (s.phase !== "session" || s.pending || s.view.status !== "active") return;
    this.set({ ...s, pending: true, error: null });
    try {
      const view = await postOutcome(s.view.id, result, stakeOverride);
      this.set({
        phase: "session",
        view,
        options: null,
        selectedStake: null,
        pending: false,
        error: null,
      });
      await this.refreshOptions();
    } catch (err) {
      const message = err instanceof ApiError ? err.message : String(err);
      this.set({ ...s, pending: false, error: message });
    }
  }

  reset(): void {
    this.set({ phase: "setup", pending: false, error: null });
  }
}
