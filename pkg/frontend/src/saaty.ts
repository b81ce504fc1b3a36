/**
 * Pairwise preference elicitation on the discrete 1-9 scale.
 *
 * Each criterion pair gets one selection encoded as a signed intensity:
 * +k means the left criterion is k times as important, -k favors the
 * right one, +1 means equal. The encoding maps one-to-one onto the
 * judgment values the ranking endpoint accepts (k or 1/k), so the form
 * can express exactly the admissible scale and nothing else.
 */

export interface CriterionPair {
  left: string;
  right: string;
}

export interface ScaleOption {
  /** Signed intensity: 9..2 favor left, 1 equal, -2..-9 favor right. */
  value: number;
  label: string;
}

const INTENSITY_WORDS: Record<number, string> = {
  2: "slightly",
  3: "moderately",
  4: "moderately+",
  5: "strongly",
  6: "strongly+",
  7: "very strongly",
  8: "very strongly+",
  9: "extremely",
};

/** All 17 selectable positions, left-favoring first. */
export const SCALE_OPTIONS: ScaleOption[] = [
  ...Array.from({ length: 8 }, (_, i) => {
    const k = 9 - i;
    return { value: k, label: `left ${INTENSITY_WORDS[k]} (${k}x)` };
  }),
  { value: 1, label: "equal" },
  ...Array.from({ length: 8 }, (_, i) => {
    const k = i + 2;
    return { value: -k, label: `right ${INTENSITY_WORDS[k]} (${k}x)` };
  }),
];

export const DEFAULT_CRITERIA = ["performance", "consumption", "security"];

/** Criterion pairs in row-major upper-triangle order. */
export function criterionPairs(criteria: string[]): CriterionPair[] {
  const pairs: CriterionPair[] = [];
  for (let i = 0; i < criteria.length; i++) {
    for (let j = i + 1; j < criteria.length; j++) {
      pairs.push({ left: criteria[i]!, right: criteria[j]! });
    }
  }
  return pairs;
}

export function isValidSelection(value: number): boolean {
  return SCALE_OPTIONS.some((option) => option.value === value);
}

/** Selected intensity for one pair to its judgment ratio. */
export function selectionToJudgment(value: number): number {
  if (!isValidSelection(value)) {
    throw new Error(`not a scale position: ${value}`);
  }
  return value >= 1 ? value : 1 / -value;
}

/** Inverse of {@link selectionToJudgment}; tolerant of float reciprocals. */
export function judgmentToSelection(judgment: number): number {
  for (const option of SCALE_OPTIONS) {
    if (Math.abs(selectionToJudgment(option.value) - judgment) <= 1e-9) {
      return option.value;
    }
  }
  throw new Error(`judgment off the 1-9 scale: ${judgment}`);
}

export interface PreferenceFormState {
  criteria: string[];
  /** One selection per pair, in pair order; null until the user chooses. */
  selections: (number | null)[];
}

export function emptyFormState(criteria: string[] = DEFAULT_CRITERIA): PreferenceFormState {
  if (criteria.length < 1 || criteria.length > 7) {
    throw new Error("between 1 and 7 criteria are supported");
  }
  return { criteria: [...criteria], selections: criterionPairs(criteria).map(() => null) };
}

export function isComplete(state: PreferenceFormState): boolean {
  return state.selections.every((s) => s !== null && isValidSelection(s));
}

/** Upper-triangle judgments for submission; requires a complete form. */
export function toJudgments(state: PreferenceFormState): number[] {
  if (!isComplete(state)) {
    throw new Error("every criterion pair needs a selection");
  }
  return state.selections.map((s) => selectionToJudgment(s!));
}
