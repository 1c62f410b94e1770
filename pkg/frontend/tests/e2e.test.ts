// @vitest-environment jsdom
//
// Round trip against a real engine: spawn the Python game service, play the
// worked two-outcome sequence through the mounted UI, check the displayed
// water level, then feed the downloaded transcript back through the CLI
// verifier and demand bit-identical states.
import { spawn, spawnSync, type ChildProcess } from 'node:child_process';
import { mkdtempSync, writeFileSync } from 'node:fs';
import { tmpdir } from 'node:os';
import { join } from 'node:path';

import { afterAll, beforeAll, describe, expect, it, vi } from 'vitest';

import { BookieClient } from '../src/api';
import { mountApp } from '../src/ui';

let service: ChildProcess;
let baseUrl = '';

beforeAll(async () => {
  service = spawn('python3', ['-m', 'bookie', 'serve', '--port', '0', '--cors'], {
    stdio: ['ignore', 'pipe', 'pipe'],
  });
  baseUrl = await new Promise<string>((resolve, reject) => {
    const timer = setTimeout(() => reject(new Error('service did not start')), 30000);
    let buffer = '';
    service.stdout!.on('data', (chunk: Buffer) => {
      buffer += chunk.toString();
      const match = buffer.match(/listening on ([\d.]+):(\d+)/);
      if (match) {
        clearTimeout(timer);
        resolve(`http://${match[1]}:${match[2]}`);
      }
    });
    service.on('exit', (code) => reject(new Error(`service exited early (${code})`)));
  });
  // wait until the HTTP loop answers
  await vi.waitFor(async () => {
    const res = await fetch(`${baseUrl}/healthz`);
    if (!res.ok) throw new Error('not healthy yet');
  });
});

afterAll(() => {
  service?.kill();
});

describe('live round trip', () => {
  it('plays the worked sequence, shows 5.744, and the transcript replays through the CLI', async () => {
    document.body.innerHTML = '<div id="app"></div>';
    const root = document.getElementById('app')!;
    const store = mountApp(root, new BookieClient(baseUrl));

    // K=2, T=4 (form defaults)
    root.querySelector<HTMLFormElement>('#new-game')!.dispatchEvent(new Event('submit'));
    await vi.waitFor(() => {
      if (root.querySelector('#level')!.textContent !== '6.000') throw new Error('no game yet');
    });

    // round 1: the split bet (0.4, 0.6) through the sliders
    const sliders = root.querySelectorAll<HTMLInputElement>('#sliders input');
    sliders[0].value = '40';
    sliders[1].value = '60';
    root.querySelector<HTMLButtonElement>('#bet')!.click();
    await vi.waitFor(() => {
      if (store.current()!.history.length !== 1) throw new Error('bet not applied');
    });

    // the water level display comes straight from the engine
    expect(root.querySelector('#level')!.textContent).toBe('5.744');
    expect(root.querySelector('#odds')!.textContent).toContain('0.4636, 0.5364');

    // rounds 2..4: decisive play keeps the level put
    for (let round = 2; round <= 4; round++) {
      root.querySelectorAll<HTMLButtonElement>('.decisive')[0].click();
      await vi.waitFor(() => {
        if (store.current()!.history.length !== round) throw new Error('bet not applied');
      });
      expect(root.querySelector('#level')!.textContent).toBe('5.744');
    }
    expect(store.current()!.done).toBe(true);
    expect(root.querySelector('#status')!.textContent).toContain('game over');

    // the downloaded transcript replays to identical states
    const transcript = store.transcriptJsonl();
    expect(transcript.trim().split('\n')).toHaveLength(4);
    const dir = mkdtempSync(join(tmpdir(), 'bookie-ui-'));
    const file = join(dir, 'transcript.jsonl');
    writeFileSync(file, transcript);
    const replay = spawnSync('python3', ['-m', 'bookie', 'verify', '--replay', file], {
      encoding: 'utf-8',
    });
    expect(replay.status, replay.stdout + replay.stderr).toBe(0);
    expect(replay.stdout).toContain('"pass":true');
  });

  it('server-rejected bets surface as errors without breaking the game', async () => {
    document.body.innerHTML = '<div id="app"></div>';
    const root = document.getElementById('app')!;
    const client = new BookieClient(baseUrl);
    const store = mountApp(root, client);
    root.querySelector<HTMLFormElement>('#new-game')!.dispatchEvent(new Event('submit'));
    await vi.waitFor(() => {
      if (root.querySelector<HTMLElement>('#game')!.hidden) throw new Error('no game yet');
    });
    // bypass the sliders and post garbage straight through the client
    await expect(client.placeBet(store.current()!.id, [2, 3])).rejects.toThrow();
    // the game is still playable
    root.querySelectorAll<HTMLButtonElement>('.decisive')[1].click();
    await vi.waitFor(() => {
      if (store.current()!.history.length !== 1) throw new Error('bet not applied');
    });
    expect(store.current()!.level).toBeCloseTo(6.0, 9);
  });
});
