import type { Classification } from './verdict.js';

/** One submitted attempt: strength data only, never the password itself. */
export interface AttemptRecord {
  attempt: number;
  bitsLower: number;
  classification: Classification;
  timestamp: number;
}

/** Session-local attempt history. Lives in memory only: a reload starts empty. */
export class SessionHistory {
  private records: AttemptRecord[] = [];

  add(bitsLower: number, classification: Classification, now = Date.now()): AttemptRecord {
    const record: AttemptRecord = {
      attempt: this.records.length + 1,
      bitsLower,
      classification,
      timestamp: now,
    };
    this.records.push(record);
    return record;
  }

  list(): readonly AttemptRecord[] {
    return this.records;
  }
}

/** Strength-vs-attempt sparkline: bits_lower by attempt index, as an SVG string. */
export function sparkline(records: readonly AttemptRecord[], w = 240, h = 60): string {
  if (records.length === 0) return '';
  const pad = 4;
  const bits = records.map((r) => r.bitsLower);
  const min = Math.min(...bits);
  const max = Math.max(...bits);
  const range = max - min || 1;
  const x = (i: number) =>
    records.length === 1 ? w / 2 : pad + (i / (records.length - 1)) * (w - 2 * pad);
  const y = (v: number) => h - pad - ((v - min) / range) * (h - 2 * pad);
  const dots = records
    .map((r, i) => `<circle cx="${x(i).toFixed(1)}" cy="${y(r.bitsLower).toFixed(1)}" r="2.5"/>`)
    .join('');
  const line =
    records.length < 2
      ? ''
      : `<polyline points="${records
          .map((r, i) => `${x(i).toFixed(1)},${y(r.bitsLower).toFixed(1)}`)
          .join(' ')}" fill="none" stroke-width="1.5" stroke-linecap="round" stroke-linejoin="round"/>`;
  return `<svg width="${w}" height="${h}" viewBox="0 0 ${w} ${h}" class="sparkline" role="img" aria-label="strength by attempt">${line}${dots}</svg>`;
}
