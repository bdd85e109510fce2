export type Classification = 'weak' | 'sub-optimal' | 'strong';

export const VERDICT_COLORS: Record<Classification, string> = {
  weak: 'red',
  'sub-optimal': 'yellow',
  strong: 'green',
};

/** The banner color is a pure function of the service's classification. */
export function verdictColor(classification: Classification): string {
  return VERDICT_COLORS[classification];
}
