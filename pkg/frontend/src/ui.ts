import { BookieClient } from './api';
import { fmtLevel, fmtMoney, fmtOdds } from './format';
import { decisiveBet, normalizeWeights } from './simplex';
import { GameStore } from './state';
import type { GameView } from './types';

let client: BookieClient;
let store: GameStore;
let rootEl: HTMLElement;
let formEl: HTMLFormElement;
let errorEl: HTMLElement;
let gameEl: HTMLElement;
let levelEl: HTMLElement;
let statusEl: HTMLElement;
let barsEl: HTMLElement;
let oddsEl: HTMLElement;
let slidersEl: HTMLElement;
let previewEl: HTMLElement;
let decisiveEl: HTMLElement;
let historyEl: HTMLElement;
let betBtn: HTMLButtonElement;
let downloadBtn: HTMLButtonElement;
let scaleLevel = 1; // initial water level; fixes the bar scale for the game
let inFlight = false;

export function mountApp(root: HTMLElement, apiClient: BookieClient): GameStore {
  client = apiClient;
  store = new GameStore();
  rootEl = root;
  root.innerHTML = `
    <h1>bookie: play the gambler</h1>
    <form id="new-game">
      <label>outcomes K <input name="K" type="number" min="1" max="64" value="2"></label>
      <label>rounds T <input name="T" type="number" min="1" max="1000000" value="4"></label>
      <label>overround <input name="gamma" type="number" min="1" step="0.01" value="1"></label>
      <button type="submit">new game</button>
      <span id="form-error" class="error" role="alert"></span>
    </form>
    <section id="game" hidden>
      <div id="status"></div>
      <div class="level-line">water level <strong id="level"></strong></div>
      <div id="bars" class="bars"></div>
      <div id="odds"></div>
      <div id="sliders"></div>
      <div id="preview"></div>
      <div id="decisive"></div>
      <button id="bet" type="button">place split bet</button>
      <h2>history</h2>
      <table id="history"><thead><tr><th>t</th><th>odds r</th><th>bet q</th><th>level L</th></tr></thead><tbody></tbody></table>
      <button id="download" type="button">download transcript</button>
    </section>
  `;
  formEl = root.querySelector('#new-game')!;
  errorEl = root.querySelector('#form-error')!;
  gameEl = root.querySelector('#game')!;
  levelEl = root.querySelector('#level')!;
  statusEl = root.querySelector('#status')!;
  barsEl = root.querySelector('#bars')!;
  oddsEl = root.querySelector('#odds')!;
  slidersEl = root.querySelector('#sliders')!;
  previewEl = root.querySelector('#preview')!;
  decisiveEl = root.querySelector('#decisive')!;
  historyEl = root.querySelector('#history tbody')!;
  betBtn = root.querySelector('#bet')!;
  downloadBtn = root.querySelector('#download')!;

  formEl.addEventListener('submit', onNewGame);
  betBtn.addEventListener('click', () => void placeBet(currentSliderBet()));
  downloadBtn.addEventListener('click', downloadTranscript);
  store.subscribe(render);
  return store;
}

async function onNewGame(ev: Event): Promise<void> {
  ev.preventDefault();
  errorEl.textContent = '';
  const data = new FormData(formEl);
  const K = Number(data.get('K'));
  const T = Number(data.get('T'));
  const gamma = Number(data.get('gamma'));
  if (!Number.isInteger(K) || K < 1 || !Number.isInteger(T) || T < 1 || !(gamma >= 1)) {
    errorEl.textContent = 'K and T must be positive integers, overround >= 1';
    return;
  }
  try {
    const resp = await client.newGame(K, T, gamma);
    buildBetPanel(K);
    store.start(resp, gamma);
  } catch (err) {
    errorEl.textContent = String(err instanceof Error ? err.message : err);
  }
}

function buildBetPanel(K: number): void {
  slidersEl.innerHTML = '';
  decisiveEl.innerHTML = '';
  for (let k = 0; k < K; k++) {
    const label = document.createElement('label');
    label.className = 'slider';
    label.append(`outcome ${k + 1} `);
    const input = document.createElement('input');
    input.type = 'range';
    input.min = '0';
    input.max = '100';
    input.value = '50';
    input.dataset.outcome = String(k);
    input.addEventListener('input', renderPreview);
    label.appendChild(input);
    slidersEl.appendChild(label);

    const btn = document.createElement('button');
    btn.type = 'button';
    btn.className = 'decisive';
    btn.dataset.outcome = String(k);
    btn.textContent = `all on ${k + 1}`;
    btn.addEventListener('click', () => void placeBet(decisiveBet(k, K)));
    decisiveEl.appendChild(btn);
  }
  renderPreview();
}

export function currentSliderBet(): number[] {
  const inputs = Array.from(slidersEl.querySelectorAll<HTMLInputElement>('input[type=range]'));
  return normalizeWeights(inputs.map((el) => Number(el.value)));
}

function renderPreview(): void {
  const q = currentSliderBet();
  previewEl.textContent = `bet: (${q.map((x) => x.toFixed(3)).join(', ')})`;
}

async function placeBet(q: number[]): Promise<void> {
  const view = store.current();
  if (!view || view.done || inFlight) {
    return;
  }
  inFlight = true;
  setControlsEnabled(false);
  try {
    const resp = await client.placeBet(view.id, q);
    store.applyBet(q, resp);
  } catch (err) {
    errorEl.textContent = String(err instanceof Error ? err.message : err);
  } finally {
    inFlight = false;
    setControlsEnabled(true);
  }
}

function setControlsEnabled(on: boolean): void {
  betBtn.disabled = !on;
  for (const btn of rootEl.querySelectorAll<HTMLButtonElement>('.decisive')) {
    btn.disabled = !on;
  }
}

function render(view: GameView): void {
  gameEl.hidden = false;
  if (view.history.length === 0) {
    scaleLevel = view.level;
  }
  levelEl.textContent = fmtLevel(view.level);
  if (view.done) {
    statusEl.textContent =
      `game over: realized loss ${fmtLevel(view.realizedLoss ?? NaN)}, ` +
      `bookmaker profit ${fmtMoney(view.profit ?? NaN)}`;
  } else {
    statusEl.textContent = `round ${view.round} of ${view.T}`;
  }
  renderBars(view);
  renderOdds(view);
  renderHistory(view);
  const playable = !view.done;
  betBtn.hidden = !playable;
  slidersEl.hidden = !playable;
  decisiveEl.hidden = !playable;
}

/** Committed payouts as filled bars, residual stacked above, rule at L. */
function renderBars(view: GameView): void {
  const scale = Math.max(scaleLevel, view.level) || 1;
  barsEl.innerHTML = '';
  for (let k = 0; k < view.K; k++) {
    const col = document.createElement('div');
    col.className = 'bar-col';
    const committed = document.createElement('div');
    committed.className = 'bar committed';
    committed.style.height = `${(100 * view.committed[k]) / scale}%`;
    committed.dataset.value = String(view.committed[k]);
    const residual = document.createElement('div');
    residual.className = 'bar residual';
    residual.style.height = `${(100 * view.residual[k]) / scale}%`;
    residual.dataset.value = String(view.residual[k]);
    const tag = document.createElement('span');
    tag.className = 'bar-tag';
    tag.textContent = fmtMoney(view.committed[k]);
    col.append(residual, committed, tag);
    barsEl.appendChild(col);
  }
  const rule = document.createElement('div');
  rule.className = 'water-rule';
  rule.style.bottom = `${(100 * view.level) / scale}%`;
  barsEl.appendChild(rule);
}

function renderOdds(view: GameView): void {
  if (view.done) {
    oddsEl.textContent = '';
    return;
  }
  const r = view.odds.map(fmtOdds).join(', ');
  let text = `odds r = (${r})`;
  if (view.gammaOdds) {
    text += ` | payout odds = (${view.gammaOdds.map(fmtOdds).join(', ')})`;
  }
  oddsEl.textContent = text;
}

function renderHistory(view: GameView): void {
  historyEl.innerHTML = '';
  for (const row of view.history) {
    const tr = document.createElement('tr');
    const cells = [
      String(row.t),
      row.odds.map(fmtOdds).join(', '),
      row.bet.map((x) => x.toFixed(4)).join(', '),
      fmtLevel(row.level),
    ];
    for (const text of cells) {
      const td = document.createElement('td');
      td.textContent = text;
      tr.appendChild(td);
    }
    historyEl.appendChild(tr);
  }
}

function downloadTranscript(): void {
  const text = store.transcriptJsonl();
  const blob = new Blob([text], { type: 'application/jsonl' });
  const a = document.createElement('a');
  a.href = URL.createObjectURL(blob);
  a.download = 'transcript.jsonl';
  a.click();
  URL.revokeObjectURL(a.href);
}
