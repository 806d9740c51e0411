/**
 * Client-side record checks.
 *
 * Mirrors the server's corpus rules for everything the editor can
 * change: span offsets against the source length, surface text against
 * the source slice, code values, span ordering and overlap, and a
 * non-empty normalized target. Offsets and slices count codepoints, so
 * accept/reject here always agrees with the store. Diagnostic kinds use
 * the server's wire names; anything flagged here would come back as a
 * 422, which is why saving stays disabled while the list is non-empty.
 */

import type { Diagnostic, WireSpan } from "./api.js";
import { codepointLength, codepointSlice } from "./offsets.js";

export const CODE_MIN = 1;
export const CODE_MAX = 13;

export function validCode(code: number): boolean {
  return Number.isInteger(code) && code >= CODE_MIN && code <= CODE_MAX;
}

export function spansOverlap(a: { start: number; end: number }, b: { start: number; end: number }): boolean {
  return a.start < b.end && b.start < a.end;
}

export interface RecordDraft {
  src: string;
  tgtNorm: string;
  spans: WireSpan[];
}

export function validateDraft(draft: RecordDraft): Diagnostic[] {
  const diags: Diagnostic[] = [];
  const srcLen = codepointLength(draft.src);

  if (!draft.tgtNorm) {
    diags.push({ kind: "empty-target", message: "normalized target must be non-empty", spans: [] });
  }

  draft.spans.forEach((sp, i) => {
    if (sp.codes.length === 0 || new Set(sp.codes).size !== sp.codes.length) {
      diags.push({
        kind: "malformed-line",
        message: `span ${i}: needs at least one code, without repeats`,
        spans: [i],
      });
    }
    for (const code of sp.codes) {
      if (!validCode(code)) {
        diags.push({ kind: "unknown-code", message: `span ${i}: code ${code} is not in 1..13`, spans: [i] });
      }
    }
    if (!(0 <= sp.start && sp.start < sp.end && sp.end <= srcLen)) {
      diags.push({
        kind: "offsets-out-of-range",
        message: `span ${i}: [${sp.start}, ${sp.end}) out of range for source of length ${srcLen}`,
        spans: [i],
      });
    } else if (sp.surface !== undefined && sp.surface !== codepointSlice(draft.src, sp.start, sp.end)) {
      diags.push({
        kind: "surface-mismatch",
        message: `span ${i}: surface no longer matches the source slice`,
        spans: [i],
      });
    }
  });

  for (let i = 1; i < draft.spans.length; i++) {
    const prev = draft.spans[i - 1]!;
    const cur = draft.spans[i]!;
    if (cur.start < prev.start || (cur.start === prev.start && cur.end < prev.end)) {
      diags.push({
        kind: "malformed-line",
        message: `spans ${i - 1} and ${i} are not sorted by start`,
        spans: [i - 1, i],
      });
    } else if (cur.start < prev.end) {
      diags.push({
        kind: "overlapping-spans",
        message: `spans ${i - 1} and ${i} overlap`,
        spans: [i - 1, i],
      });
    }
  }

  return diags;
}
