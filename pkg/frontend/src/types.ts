export type NewGameResponse = {
  id: string;
  r1: number[];
  L: number;
  T: number;
  K: number;
};

export type BetResponse = {
  r_next?: number[];
  gamma_odds?: number[];
  s: number[];
  L: number;
  v: number[];
  H: number;
  done: boolean;
  realized_loss?: number;
  profit?: number;
};

export type ApiError = {
  error: string;
  detail: string;
};

/** One transcript record in the engine's JSONL format. */
export type TranscriptRecord = {
  t: number;
  r: number[];
  q: number[];
  s: number[];
  L: number;
  H: number;
};

export type HistoryRow = {
  t: number;
  odds: number[];
  bet: number[];
  level: number;
};

/** Client-side view of a running game; every number comes from the server. */
export type GameView = {
  id: string;
  K: number;
  T: number;
  gamma: number;
  round: number; // 1-based round awaiting a bet
  odds: number[];
  gammaOdds: number[] | null;
  committed: number[]; // s
  residual: number[]; // v
  level: number; // L
  done: boolean;
  realizedLoss: number | null;
  profit: number | null;
  history: HistoryRow[];
  transcript: TranscriptRecord[];
};
