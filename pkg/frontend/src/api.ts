import type { ApiError, BetResponse, NewGameResponse } from './types';

/** Thin client for the game service; all loss math stays server-side. */
export class BookieClient {
  constructor(private baseUrl: string) {}

  async newGame(K: number, T: number, gamma: number): Promise<NewGameResponse> {
    return this.post<NewGameResponse>('/games', { K, T, gamma });
  }

  async placeBet(gameId: string, q: number[]): Promise<BetResponse> {
    return this.post<BetResponse>(`/games/${gameId}/bets`, { q });
  }

  private async post<T>(path: string, body: unknown): Promise<T> {
    const res = await fetch(`${this.baseUrl}${path}`, {
      method: 'POST',
      headers: { 'Content-Type': 'application/json' },
      body: JSON.stringify(body),
    });
    const payload = await res.json();
    if (!res.ok) {
      const err = payload as ApiError;
      throw new Error(err.detail ?? err.error ?? `HTTP ${res.status}`);
    }
    return payload as T;
  }
}
