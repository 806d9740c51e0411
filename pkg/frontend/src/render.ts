/**
 * Source line rendering: the sentence as text nodes with one <mark>
 * per annotated span. Spans arrive as codepoint offsets and are
 * converted to UTF-16 for slicing here, so what gets highlighted is
 * exactly the stored surface even after emoji.
 */

import type { DraftSpan } from "./editor.js";
import { codepointToUtf16 } from "./offsets.js";

export interface SourceMarks {
  selected?: number | null;
  rejected?: number[];
  draft?: { start: number; end: number } | null;
}

interface Segment {
  start: number;
  end: number;
  cls: string;
  index: number | null;
}

export function renderSource(el: HTMLElement, src: string, spans: DraftSpan[], marks: SourceMarks = {}): void {
  const segments: Segment[] = spans.map((sp, i) => {
    let cls = "span";
    if (marks.selected === i) cls += " is-selected";
    if (marks.rejected?.includes(i)) cls += " is-clash";
    return { start: sp.start, end: sp.end, cls, index: i };
  });
  if (marks.draft) {
    segments.push({ start: marks.draft.start, end: marks.draft.end, cls: "span is-draft", index: null });
  }
  segments.sort((a, b) => a.start - b.start || a.end - b.end);

  el.textContent = "";
  let pos = 0; // UTF-16 write head
  const doc = el.ownerDocument;
  for (const seg of segments) {
    const from = codepointToUtf16(src, seg.start);
    const to = codepointToUtf16(src, seg.end);
    if (from > pos) el.appendChild(doc.createTextNode(src.slice(pos, from)));
    const mark = doc.createElement("mark");
    mark.className = seg.cls;
    if (seg.index !== null) mark.dataset.index = String(seg.index);
    mark.textContent = src.slice(from, to);
    el.appendChild(mark);
    pos = to;
  }
  if (pos < src.length) el.appendChild(doc.createTextNode(src.slice(pos)));
}
