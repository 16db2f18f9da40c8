export interface HistoryRow {
  round: number;
  capital_before: number;
  stake: number;
  result: "win" | "lose";
  capital_after: number;
}

export type SessionStatus = "active" | "winner" | "loser" | "deadline";

export interface SessionView {
  id: string;
  p: string;
  N: number;
  T: number;
  capital: number;
  rounds_played: number;
  remaining: number;
  status: SessionStatus;
  history: HistoryRow[];
  recommended_stake: number | null;
  survival: string | null;
  survival_decimal: string | null;
  warning?: string;
}

export interface OptionEntry {
  stake: number;
  survival: string;
  survival_decimal: string;
  optimal: boolean;
}

export interface OptionsPayload {
  id: string;
  capital: number;
  remaining: number;
  options: OptionEntry[];
  recommended_stake: number;
}

export interface SetupInputs {
  p: string;
  goal: string;
  horizon: string;
  capital: string;
}

export interface FieldError {
  field: string;
  message: string;
}
