/**
 * Editor state for one record.
 *
 * Holds the record as last seen from the server, the local span edits,
 * a dirty flag, the revision the client believes it is editing, and
 * the current client-side diagnostics. All mutation goes through the
 * methods here; every one re-runs validation and notifies subscribers,
 * so the view layer only ever renders a consistent snapshot.
 *
 * Saving is blocked while diagnostics exist or a conflict is open.
 * Conflicts are never merged silently: a stale save keeps the local
 * edits, surfaces the server copy, and the annotator picks a side for
 * every span that differs.
 */

import {
  ApiClient,
  ApiError,
  StaleRevision,
  ValidationRejected,
  type Diagnostic,
  type PreviewResult,
  type TypologyEntry,
  type WireRecord,
  type WireSpan,
} from "./api.js";
import { codepointSlice } from "./offsets.js";
import { spansOverlap, validateDraft, validCode } from "./validate.js";

export interface DraftSpan {
  start: number;
  end: number;
  surface: string;
  codes: number[];
  norm: string;
}

export type SelectOutcome =
  | { kind: "draft"; draft: DraftSpan }
  | { kind: "rejected"; overlaps: number[] }
  | { kind: "noop" };

/** One row of the stale-save dialog: pick a side, absent side = drop. */
export interface MergeRow {
  mine: DraftSpan | null;
  theirs: DraftSpan | null;
  pick: "mine" | "theirs";
}

export interface ConflictState {
  actualRevision: number;
  theirs: WireRecord;
  rows: MergeRow[];
}

function toDraftSpan(src: string, sp: WireSpan): DraftSpan {
  return {
    start: sp.start,
    end: sp.end,
    surface: sp.surface ?? codepointSlice(src, sp.start, sp.end),
    codes: [...sp.codes],
    norm: sp.norm,
  };
}

function toWireSpan(sp: DraftSpan): WireSpan {
  return { start: sp.start, end: sp.end, codes: [...sp.codes], norm: sp.norm, surface: sp.surface };
}

function sameSpan(a: DraftSpan, b: DraftSpan): boolean {
  return (
    a.start === b.start &&
    a.end === b.end &&
    a.norm === b.norm &&
    a.codes.length === b.codes.length &&
    a.codes.every((c, i) => c === b.codes[i])
  );
}

function sortKey(a: DraftSpan, b: DraftSpan): number {
  return a.start - b.start || a.end - b.end;
}

export class Editor {
  record: WireRecord | null = null;
  spans: DraftSpan[] = [];
  tgtNorm = "";
  revision = 0;
  dirty = false;
  diagnostics: Diagnostic[] = [];
  serverDiagnostics: Diagnostic[] = [];
  typology: TypologyEntry[] = [];

  /** Pending span awaiting codes; non-null means the picker is open. */
  draft: DraftSpan | null = null;
  /** Indices of spans a rejected selection collided with. */
  rejectedOverlaps: number[] = [];
  selected: number | null = null;

  conflict: ConflictState | null = null;
  preview: PreviewResult | null = null;
  previewError: string | null = null;
  error: string | null = null;

  private listeners = new Set<() => void>();

  constructor(private readonly api: ApiClient) {}

  subscribe(fn: () => void): () => void {
    this.listeners.add(fn);
    return () => this.listeners.delete(fn);
  }

  private emit(): void {
    for (const fn of this.listeners) fn();
  }

  private revalidate(): void {
    const src = this.record?.src ?? "";
    this.diagnostics = validateDraft({
      src,
      tgtNorm: this.tgtNorm,
      spans: this.spans.map(toWireSpan),
    });
  }

  private touch(): void {
    this.dirty = true;
    this.preview = null; // stale against the edited spans
    this.serverDiagnostics = [];
    this.revalidate();
    this.emit();
  }

  get canSave(): boolean {
    return this.record !== null && this.dirty && this.diagnostics.length === 0 && this.conflict === null;
  }

  async loadTypology(): Promise<void> {
    this.typology = await this.api.typology();
    this.emit();
  }

  async open(id: string): Promise<void> {
    const record = await this.api.record(id);
    this.record = record;
    this.spans = record.spans.map((sp) => toDraftSpan(record.src, sp));
    this.tgtNorm = record.tgt_norm;
    this.revision = record.revision;
    this.dirty = false;
    this.draft = null;
    this.selected = null;
    this.rejectedOverlaps = [];
    this.conflict = null;
    this.preview = null;
    this.previewError = null;
    this.serverDiagnostics = [];
    this.error = null;
    this.revalidate();
    this.emit();
  }

  // --- span selection -----------------------------------------------------

  /**
   * Turn a selection (codepoint offsets into the source) into a draft
   * span and open the code picker. Zero-length selections do nothing;
   * a selection crossing an existing span is rejected and the clashing
   * spans are flagged for highlighting.
   */
  selectSpan(start: number, end: number): SelectOutcome {
    if (this.record === null || start === end) return { kind: "noop" };
    const range = { start: Math.min(start, end), end: Math.max(start, end) };
    const overlaps = this.spans
      .map((sp, i) => (spansOverlap(range, sp) ? i : -1))
      .filter((i) => i >= 0);
    if (overlaps.length > 0) {
      this.rejectedOverlaps = overlaps;
      this.draft = null;
      this.emit();
      return { kind: "rejected", overlaps };
    }
    const surface = codepointSlice(this.record.src, range.start, range.end);
    this.draft = { ...range, surface, codes: [], norm: surface };
    this.rejectedOverlaps = [];
    this.emit();
    return { kind: "draft", draft: this.draft };
  }

  toggleDraftCode(code: number): void {
    if (!this.draft || !validCode(code)) return;
    const at = this.draft.codes.indexOf(code);
    if (at >= 0) this.draft.codes.splice(at, 1);
    else this.draft.codes.push(code);
    this.emit();
  }

  setDraftNorm(norm: string): void {
    if (!this.draft) return;
    this.draft.norm = norm;
    this.emit();
  }

  /** Commit the draft into the span list, kept sorted by offsets. */
  commitDraft(): boolean {
    if (!this.draft || this.draft.codes.length === 0) return false;
    const span = { ...this.draft, codes: [...this.draft.codes].sort((a, b) => a - b) };
    this.draft = null;
    const at = this.spans.findIndex((sp) => sortKey(span, sp) < 0);
    const index = at === -1 ? this.spans.length : at;
    this.spans.splice(index, 0, span);
    this.selected = index;
    this.touch();
    return true;
  }

  cancelDraft(): void {
    this.draft = null;
    this.rejectedOverlaps = [];
    this.emit();
  }

  // --- edits to committed spans --------------------------------------------

  select(index: number | null): void {
    this.selected = index !== null && index >= 0 && index < this.spans.length ? index : null;
    this.emit();
  }

  toggleCode(index: number, code: number): void {
    const span = this.spans[index];
    if (!span || !validCode(code)) return;
    const at = span.codes.indexOf(code);
    if (at >= 0) span.codes.splice(at, 1);
    else {
      span.codes.push(code);
      span.codes.sort((a, b) => a - b);
    }
    this.touch();
  }

  setNorm(index: number, norm: string): void {
    const span = this.spans[index];
    if (!span) return;
    span.norm = norm;
    this.touch();
  }

  setTgtNorm(text: string): void {
    this.tgtNorm = text;
    this.touch();
  }

  deleteSpan(index: number): void {
    if (index < 0 || index >= this.spans.length) return;
    this.spans.splice(index, 1);
    if (this.selected !== null) {
      if (this.selected === index) this.selected = null;
      else if (this.selected > index) this.selected -= 1;
    }
    this.touch();
  }

  // --- preview --------------------------------------------------------------

  /**
   * Ask the server for the fully normalized sentence and the variants
   * that keep exactly one span each, so every annotation decision is
   * visible before saving. Requires a clean client-side validation
   * pass; server rejections land in previewError.
   */
  async refreshPreview(): Promise<void> {
    if (this.record === null) return;
    if (this.diagnostics.length > 0) {
      this.preview = null;
      this.previewError = "fix the flagged spans before previewing";
      this.emit();
      return;
    }
    try {
      this.preview = await this.api.preview(
        {
          id: this.record.id,
          src: this.record.src,
          tgt: this.record.tgt,
          tgt_norm: this.tgtNorm || "-",
          revision: this.revision,
          spans: this.spans.map(toWireSpan),
        },
        "exactly_n",
        { n: 1 },
      );
      this.previewError = null;
    } catch (err) {
      this.preview = null;
      this.previewError = err instanceof ApiError ? err.message : String(err);
    }
    this.emit();
  }

  // --- save and conflict handling -------------------------------------------

  async save(): Promise<boolean> {
    if (!this.canSave || this.record === null) return false;
    try {
      const updated = await this.api.saveRecord(this.record.id, {
        expected_revision: this.revision,
        spans: this.spans.map(toWireSpan),
        tgt_norm: this.tgtNorm,
      });
      this.adopt(updated);
      return true;
    } catch (err) {
      if (err instanceof StaleRevision) {
        this.conflict = {
          actualRevision: err.actualRevision,
          theirs: err.record,
          rows: this.mergeRows(err.record),
        };
      } else if (err instanceof ValidationRejected) {
        this.serverDiagnostics = err.diagnostics;
      } else {
        this.error = err instanceof Error ? err.message : String(err);
      }
      this.emit();
      return false;
    }
  }

  private adopt(record: WireRecord): void {
    this.record = record;
    this.spans = record.spans.map((sp) => toDraftSpan(record.src, sp));
    this.tgtNorm = record.tgt_norm;
    this.revision = record.revision;
    this.dirty = false;
    this.serverDiagnostics = [];
    this.conflict = null;
    this.error = null;
    this.revalidate();
    this.emit();
  }

  /**
   * Pair local spans with the server's for the merge dialog. Identical
   * spans share a row; a differing span is paired with the first
   * counterpart it overlaps, and spans only one side has get a row of
   * their own. Local edits win by default.
   */
  private mergeRows(theirs: WireRecord): MergeRow[] {
    const mine = this.spans.map((sp) => ({ ...sp, codes: [...sp.codes] }));
    const other = theirs.spans.map((sp) => toDraftSpan(theirs.src, sp));
    const claimed = new Set<number>();
    const rows: MergeRow[] = [];

    for (const span of mine) {
      let match: number | null = null;
      for (let j = 0; j < other.length; j++) {
        if (claimed.has(j)) continue;
        if (sameSpan(span, other[j]!) || spansOverlap(span, other[j]!)) {
          match = j;
          break;
        }
      }
      if (match !== null) claimed.add(match);
      rows.push({ mine: span, theirs: match !== null ? other[match]! : null, pick: "mine" });
    }
    other.forEach((span, j) => {
      if (!claimed.has(j)) rows.push({ mine: null, theirs: span, pick: "theirs" });
    });
    rows.sort((a, b) => sortKey((a.mine ?? a.theirs)!, (b.mine ?? b.theirs)!));
    return rows;
  }

  setMergePick(rowIndex: number, pick: "mine" | "theirs"): void {
    const row = this.conflict?.rows[rowIndex];
    if (!row) return;
    row.pick = pick;
    this.emit();
  }

  /**
   * Close the dialog with the chosen sides. The result is revalidated
   * like any other edit and saved against the server's revision, so a
   * bad mix of picks still cannot reach the store.
   */
  applyMerge(): void {
    if (!this.conflict) return;
    const chosen: DraftSpan[] = [];
    for (const row of this.conflict.rows) {
      const span = row.pick === "mine" ? row.mine : row.theirs;
      if (span) chosen.push(span);
    }
    chosen.sort(sortKey);
    this.spans = chosen;
    this.tgtNorm = this.tgtNorm || this.conflict.theirs.tgt_norm;
    this.revision = this.conflict.actualRevision;
    this.conflict = null;
    this.touch();
  }

  /** Throw the local edits away and take the server's copy. */
  discardForTheirs(): void {
    if (!this.conflict) return;
    this.adopt(this.conflict.theirs);
  }
}
