// @vitest-environment jsdom
import { Blob as NodeBlob } from 'node:buffer';

import { beforeEach, describe, expect, it, vi } from 'vitest';

import type { BookieClient } from '../src/api';
import { currentSliderBet, mountApp } from '../src/ui';
import type { BetResponse, NewGameResponse } from '../src/types';

const newGameResp: NewGameResponse = { id: 'game-1', r1: [0.5, 0.5], L: 6, T: 4, K: 2 };

const splitResp: BetResponse = {
  r_next: [0.46355100110704556, 0.5364489988929544],
  gamma_odds: [2.1572599295693786, 1.8641101056459326],
  s: [0.8, 1.2],
  L: 5.743559577416269,
  v: [4.943559577416269, 4.543559577416269],
  H: 3,
  done: false,
};

function stubClient() {
  return {
    newGame: vi.fn(async () => newGameResp),
    placeBet: vi.fn(async () => splitResp),
  } as unknown as BookieClient & { newGame: ReturnType<typeof vi.fn>; placeBet: ReturnType<typeof vi.fn> };
}

async function startGame(client: BookieClient) {
  const root = document.getElementById('app')!;
  const store = mountApp(root, client);
  root.querySelector<HTMLFormElement>('#new-game')!.dispatchEvent(new Event('submit'));
  await vi.waitFor(() => {
    if (root.querySelector<HTMLElement>('#game')!.hidden) throw new Error('not started');
  });
  return { root, store };
}

beforeEach(() => {
  document.body.innerHTML = '<div id="app"></div>';
});

describe('game view', () => {
  it('shows the server water level and uniform first odds verbatim', async () => {
    const client = stubClient();
    const { root } = await startGame(client);
    expect(client.newGame).toHaveBeenCalledWith(2, 4, 1);
    expect(root.querySelector('#level')!.textContent).toBe('6.000');
    expect(root.querySelector('#odds')!.textContent).toContain('0.5000, 0.5000');
    expect(root.querySelector('#status')!.textContent).toBe('round 1 of 4');
    // two committed bars at zero, residuals at the level
    const residuals = root.querySelectorAll<HTMLElement>('.bar.residual');
    expect(residuals).toHaveLength(2);
    expect(residuals[0].dataset.value).toBe('6');
  });

  it('renders a split-bet update entirely from the response', async () => {
    const client = stubClient();
    const { root } = await startGame(client);
    root.querySelector<HTMLButtonElement>('#bet')!.click();
    await vi.waitFor(() => {
      if (root.querySelector('#level')!.textContent !== '5.744') throw new Error('no update');
    });
    const [q] = client.placeBet.mock.calls[0].slice(1) as [number[]];
    expect(Math.abs(q.reduce((a: number, b: number) => a + b, 0) - 1)).toBeLessThanOrEqual(1e-12);
    expect(root.querySelector('#odds')!.textContent).toContain('0.4636, 0.5364');
    const committed = root.querySelectorAll<HTMLElement>('.bar.committed');
    expect(committed[0].dataset.value).toBe('0.8');
    expect(committed[1].dataset.value).toBe('1.2');
    const rows = root.querySelectorAll('#history tbody tr');
    expect(rows).toHaveLength(1);
    expect(rows[0].textContent).toContain('5.744');
  });

  it('decisive buttons post a basis vector', async () => {
    const client = stubClient();
    const { root } = await startGame(client);
    root.querySelectorAll<HTMLButtonElement>('.decisive')[1].click();
    await vi.waitFor(() => {
      if (client.placeBet.mock.calls.length === 0) throw new Error('no bet yet');
    });
    expect(client.placeBet).toHaveBeenCalledWith('game-1', [0, 1]);
  });

  it('slider bets are normalized to the simplex', async () => {
    const client = stubClient();
    const { root } = await startGame(client);
    const sliders = root.querySelectorAll<HTMLInputElement>('#sliders input');
    sliders[0].value = '90';
    sliders[1].value = '30';
    const q = currentSliderBet();
    expect(q[0]).toBeCloseTo(0.75, 12);
    expect(q[1]).toBeCloseTo(0.25, 12);
  });

  it('disables controls while a bet is in flight', async () => {
    const client = stubClient();
    let release!: (value: BetResponse) => void;
    client.placeBet.mockImplementationOnce(
      () => new Promise<BetResponse>((resolve) => (release = resolve)),
    );
    const { root } = await startGame(client);
    const betBtn = root.querySelector<HTMLButtonElement>('#bet')!;
    betBtn.click();
    await vi.waitFor(() => {
      if (!betBtn.disabled) throw new Error('not disabled yet');
    });
    root.querySelectorAll<HTMLButtonElement>('.decisive')[0].click();
    expect(client.placeBet).toHaveBeenCalledTimes(1); // second click ignored
    release(splitResp);
    await vi.waitFor(() => {
      if (betBtn.disabled) throw new Error('still disabled');
    });
  });

  it('shows final accounting and hides betting controls when done', async () => {
    const client = stubClient();
    client.placeBet.mockImplementationOnce(async () => ({
      s: [6, 2],
      L: 6,
      v: [0, 4],
      H: 0,
      done: true,
      realized_loss: 6,
      profit: -2,
    }));
    const { root } = await startGame(client);
    root.querySelector<HTMLButtonElement>('#bet')!.click();
    await vi.waitFor(() => {
      if (!root.querySelector('#status')!.textContent!.includes('game over')) {
        throw new Error('not finished');
      }
    });
    expect(root.querySelector('#status')!.textContent).toContain('realized loss 6.000');
    expect(root.querySelector('#status')!.textContent).toContain('profit -2.00');
    expect(root.querySelector<HTMLButtonElement>('#bet')!.hidden).toBe(true);
  });

  it('download produces the transcript JSONL', async () => {
    const client = stubClient();
    const { root, store } = await startGame(client);
    root.querySelector<HTMLButtonElement>('#bet')!.click();
    await vi.waitFor(() => {
      if (store.current()!.history.length !== 1) throw new Error('no round yet');
    });
    vi.stubGlobal('Blob', NodeBlob); // jsdom's Blob has no .text()
    const captured: NodeBlob[] = [];
    (URL as unknown as Record<string, unknown>).createObjectURL = (blob: NodeBlob) => {
      captured.push(blob);
      return 'blob:fake';
    };
    (URL as unknown as Record<string, unknown>).revokeObjectURL = () => undefined;
    const click = vi
      .spyOn(HTMLAnchorElement.prototype, 'click')
      .mockImplementation(() => undefined);
    root.querySelector<HTMLButtonElement>('#download')!.click();
    click.mockRestore();
    vi.unstubAllGlobals();
    expect(captured).toHaveLength(1);
    const text = await captured[0].text();
    expect(text).toBe(store.transcriptJsonl());
    const rec = JSON.parse(text.trim());
    expect(rec.L).toBe(5.743559577416269);
  });

  it('rejects bad form input client-side', async () => {
    const client = stubClient();
    const root = document.getElementById('app')!;
    mountApp(root, client);
    root.querySelector<HTMLInputElement>('input[name=K]')!.value = '0';
    root.querySelector<HTMLFormElement>('#new-game')!.dispatchEvent(new Event('submit'));
    await vi.waitFor(() => {
      if (!root.querySelector('#form-error')!.textContent) throw new Error('no error shown');
    });
    expect(client.newGame).not.toHaveBeenCalled();
  });
});
