import { describe, expect, it } from 'vitest';

import { SessionHistory, sparkline } from '../src/history.js';

describe('session history', () => {
  it('numbers attempts from 1 and keeps insertion order', () => {
    const h = new SessionHistory();
    h.add(14.1, 'weak', 1000);
    h.add(34.3, 'sub-optimal', 2000);
    h.add(51.0, 'strong', 3000);
    expect(h.list().map((r) => r.attempt)).toEqual([1, 2, 3]);
    expect(h.list().map((r) => r.bitsLower)).toEqual([14.1, 34.3, 51.0]);
    expect(h.list()[1]).toEqual({
      attempt: 2,
      bitsLower: 34.3,
      classification: 'sub-optimal',
      timestamp: 2000,
    });
  });

  it('records strength data only — no password field exists', () => {
    const h = new SessionHistory();
    const record = h.add(20, 'weak');
    expect(Object.keys(record).sort()).toEqual([
      'attempt',
      'bitsLower',
      'classification',
      'timestamp',
    ]);
  });
});

function points(svg: string): Array<[number, number]> {
  const m = svg.match(/points="([^"]+)"/);
  if (!m) return [];
  return m[1].split(' ').map((pair) => {
    const [x, y] = pair.split(',').map(Number);
    return [x, y];
  });
}

describe('sparkline', () => {
  it('is empty with no attempts', () => {
    expect(sparkline([])).toBe('');
  });

  it('renders one attempt as a single point, no line', () => {
    const h = new SessionHistory();
    h.add(30, 'sub-optimal');
    const svg = sparkline(h.list());
    expect(svg).toContain('<circle');
    expect(svg).not.toContain('<polyline');
    expect(svg.match(/<circle/g)).toHaveLength(1);
  });

  it('renders increasing bits as a rising line', () => {
    const h = new SessionHistory();
    h.add(14, 'weak');
    h.add(34, 'sub-optimal');
    h.add(51, 'strong');
    const svg = sparkline(h.list());
    const pts = points(svg);
    expect(pts).toHaveLength(3);
    for (let i = 1; i < pts.length; i++) {
      expect(pts[i][0]).toBeGreaterThan(pts[i - 1][0]); // x moves right
      expect(pts[i][1]).toBeLessThan(pts[i - 1][1]); // y moves up (screen coords)
    }
    expect(svg.match(/<circle/g)).toHaveLength(3);
  });

  it('handles a flat line (all attempts equally strong)', () => {
    const h = new SessionHistory();
    h.add(40, 'sub-optimal');
    h.add(40, 'sub-optimal');
    const pts = points(sparkline(h.list()));
    expect(pts[0][1]).toBe(pts[1][1]);
  });
});
