import type { BetResponse, GameView, NewGameResponse, TranscriptRecord } from './types';

type Listener = (view: GameView) => void;

/** Holds the current game and folds server responses into the view.
 *
 * The store never computes losses or residuals itself: `level`,
 * `committed` and `residual` are copied verbatim from the last response,
 * and the transcript accumulates the exact per-round records the engine
 * format expects ({t, r, q, s, L, H}).
 */
export class GameStore {
  private view: GameView | null = null;
  private listeners: Listener[] = [];

  subscribe(fn: Listener): void {
    this.listeners.push(fn);
  }

  current(): GameView | null {
    return this.view;
  }

  start(resp: NewGameResponse, gamma: number): GameView {
    this.view = {
      id: resp.id,
      K: resp.K,
      T: resp.T,
      gamma,
      round: 1,
      odds: resp.r1,
      gammaOdds: null,
      committed: new Array<number>(resp.K).fill(0),
      residual: resp.r1.map(() => resp.L),
      level: resp.L,
      done: false,
      realizedLoss: null,
      profit: null,
      history: [],
      transcript: [],
    };
    return this.emit();
  }

  applyBet(bet: number[], resp: BetResponse): GameView {
    const view = this.view;
    if (!view) {
      throw new Error('no game in progress');
    }
    const t = view.round;
    const record: TranscriptRecord = {
      t,
      r: view.odds,
      q: bet,
      s: resp.s,
      L: resp.L,
      H: resp.H,
    };
    view.transcript.push(record);
    view.history.push({ t, odds: view.odds, bet, level: resp.L });
    view.committed = resp.s;
    view.residual = resp.v;
    view.level = resp.L;
    view.round = t + 1;
    view.done = resp.done;
    view.realizedLoss = resp.realized_loss ?? null;
    view.profit = resp.profit ?? null;
    if (resp.r_next) {
      view.odds = resp.r_next;
      view.gammaOdds = resp.gamma_odds ?? null;
    } else {
      view.gammaOdds = null;
    }
    return this.emit();
  }

  /** JSONL in the engine's transcript format; replayable by the CLI. */
  transcriptJsonl(): string {
    const view = this.view;
    if (!view) {
      return '';
    }
    return view.transcript.map((rec) => JSON.stringify(rec)).join('\n') + '\n';
  }

  private emit(): GameView {
    const view = this.view!;
    for (const fn of this.listeners) {
      fn(view);
    }
    return view;
  }
}
