/**
 * Codepoint offset arithmetic.
 *
 * Span offsets in the record store count Unicode codepoints, the same
 * unit Python indexes strings by. JavaScript strings and DOM Range
 * offsets count UTF-16 code units instead, so every astral character
 * (emoji, rare CJK) is two units but one codepoint. Offsets must cross
 * that boundary through these helpers and nowhere else, otherwise a
 * span saved after an emoji lands one short of where it was selected.
 */

export interface CodepointRange {
  start: number;
  end: number;
}

/** Number of codepoints in the string. */
export function codepointLength(text: string): number {
  let n = 0;
  for (const _ of text) n++;
  return n;
}

/** Convert a UTF-16 unit offset to a codepoint offset. */
export function utf16ToCodepoint(text: string, utf16Offset: number): number {
  let cp = 0;
  let unit = 0;
  for (const ch of text) {
    if (unit >= utf16Offset) break;
    unit += ch.length;
    cp += 1;
  }
  return cp;
}

/** Convert a codepoint offset to a UTF-16 unit offset. */
export function codepointToUtf16(text: string, cpOffset: number): number {
  let cp = 0;
  let unit = 0;
  for (const ch of text) {
    if (cp >= cpOffset) break;
    unit += ch.length;
    cp += 1;
  }
  return unit;
}

/** text[start:end] with codepoint offsets, like a Python slice. */
export function codepointSlice(text: string, start: number, end: number): string {
  return text.slice(codepointToUtf16(text, start), codepointToUtf16(text, end));
}

const TEXT_NODE = 3;

/**
 * UTF-16 units of text strictly before the boundary point
 * (container, offset) in document order, or null when the container
 * does not sit under root. Element containers follow the DOM Range
 * convention: offset counts child nodes, the boundary sits before
 * child[offset].
 */
export function utf16OffsetIn(root: Node, container: Node, offset: number): number | null {
  let total = 0;

  const walk = (node: Node): boolean => {
    if (node === container) {
      if (node.nodeType === TEXT_NODE) {
        total += offset;
        return true;
      }
      const kids = node.childNodes;
      const stop = Math.min(offset, kids.length);
      for (let i = 0; i < stop; i++) total += (kids[i]!.textContent ?? "").length;
      return true;
    }
    if (node.nodeType === TEXT_NODE) {
      total += (node.nodeValue ?? "").length;
      return false;
    }
    for (let i = 0; i < node.childNodes.length; i++) {
      if (walk(node.childNodes[i]!)) return true;
    }
    return false;
  };

  return walk(root) ? total : null;
}

interface RangeLike {
  startContainer: Node;
  startOffset: number;
  endContainer: Node;
  endOffset: number;
}

/**
 * Map a DOM range over the rendered source to codepoint offsets into
 * root.textContent. Returns null when either endpoint falls outside
 * root. Backwards selections come out normalized (start <= end).
 */
export function rangeToCodepoints(root: Node, range: RangeLike): CodepointRange | null {
  const a = utf16OffsetIn(root, range.startContainer, range.startOffset);
  const b = utf16OffsetIn(root, range.endContainer, range.endOffset);
  if (a === null || b === null) return null;
  const text = root.textContent ?? "";
  const lo = Math.min(a, b);
  const hi = Math.max(a, b);
  return { start: utf16ToCodepoint(text, lo), end: utf16ToCodepoint(text, hi) };
}
