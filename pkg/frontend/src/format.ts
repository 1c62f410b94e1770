export function fmtLevel(x: number): string {
  return x.toFixed(3);
}

export function fmtOdds(x: number): string {
  return x.toFixed(4);
}

export function fmtMoney(x: number): string {
  return x.toFixed(2);
}
