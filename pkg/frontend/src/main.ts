/**
 * Page wiring. All state lives in Editor; this file renders snapshots
 * and forwards DOM events. Served by the annotation server next to its
 * API, so same-origin requests need no base URL.
 */

import { ApiClient } from "./api.js";
import { Editor } from "./editor.js";
import { CodeKeypad } from "./keypad.js";
import { rangeToCodepoints } from "./offsets.js";
import { renderSource } from "./render.js";

const api = new ApiClient();
const editor = new Editor(api);
const keypad = new CodeKeypad();

const $ = <T extends HTMLElement>(sel: string): T => {
  const el = document.querySelector<T>(sel);
  if (!el) throw new Error(`missing element ${sel}`);
  return el;
};

const recordList = $("#record-list");
const sourceEl = $("#source");
const spanTable = $("#span-table");
const pickerEl = $("#picker");
const tgtNormEl = $<HTMLTextAreaElement>("#tgt-norm");
const diagnosticsEl = $("#diagnostics");
const previewEl = $("#preview");
const statusEl = $("#status");
const saveBtn = $<HTMLButtonElement>("#save");
const previewBtn = $<HTMLButtonElement>("#preview-btn");
const conflictEl = $("#conflict");

let summaries: { id: string; span_count: number; revision: number }[] = [];

function codeName(code: number): string {
  return editor.typology.find((t) => t.code === code)?.name ?? `code ${code}`;
}

function chip(code: number, onToggle: () => void, active = true): HTMLElement {
  const el = document.createElement("button");
  el.type = "button";
  el.className = active ? "chip is-on" : "chip";
  el.textContent = `${code} ${codeName(code)}`;
  el.addEventListener("click", onToggle);
  return el;
}

function renderRecordList(): void {
  recordList.textContent = "";
  for (const summary of summaries) {
    const li = document.createElement("li");
    const btn = document.createElement("button");
    btn.type = "button";
    btn.textContent = `${summary.id} (${summary.span_count})`;
    if (editor.record?.id === summary.id) btn.className = "is-open";
    btn.addEventListener("click", () => void editor.open(summary.id));
    li.appendChild(btn);
    recordList.appendChild(li);
  }
}

function renderPicker(): void {
  pickerEl.textContent = "";
  pickerEl.hidden = editor.draft === null;
  if (!editor.draft) return;

  const caption = document.createElement("p");
  caption.textContent = `new span: “${editor.draft.surface}” [${editor.draft.start}, ${editor.draft.end})`;
  pickerEl.appendChild(caption);

  const grid = document.createElement("div");
  grid.className = "picker-grid";
  for (const entry of editor.typology) {
    grid.appendChild(
      chip(entry.code, () => editor.toggleDraftCode(entry.code), editor.draft.codes.includes(entry.code)),
    );
  }
  pickerEl.appendChild(grid);

  const norm = document.createElement("input");
  norm.id = "draft-norm";
  norm.value = editor.draft.norm;
  norm.placeholder = "normalized form (empty deletes)";
  norm.addEventListener("input", () => editor.setDraftNorm(norm.value));
  pickerEl.appendChild(norm);

  const add = document.createElement("button");
  add.type = "button";
  add.textContent = "add span";
  add.disabled = editor.draft.codes.length === 0;
  add.addEventListener("click", () => editor.commitDraft());
  pickerEl.appendChild(add);

  const cancel = document.createElement("button");
  cancel.type = "button";
  cancel.textContent = "cancel";
  cancel.addEventListener("click", () => editor.cancelDraft());
  pickerEl.appendChild(cancel);
}

function renderSpanTable(): void {
  if (spanTable.contains(document.activeElement)) return; // keep typing focus
  spanTable.textContent = "";
  editor.spans.forEach((span, i) => {
    const row = document.createElement("div");
    row.className = i === editor.selected ? "span-row is-selected" : "span-row";
    row.addEventListener("click", () => editor.select(i));

    const surface = document.createElement("code");
    surface.textContent = span.surface;
    row.appendChild(surface);

    const chips = document.createElement("span");
    chips.className = "chips";
    for (const code of span.codes) chips.appendChild(chip(code, () => editor.toggleCode(i, code)));
    row.appendChild(chips);

    const norm = document.createElement("input");
    norm.value = span.norm;
    norm.addEventListener("input", () => editor.setNorm(i, norm.value));
    row.appendChild(norm);

    const del = document.createElement("button");
    del.type = "button";
    del.textContent = "×";
    del.title = "delete span";
    del.addEventListener("click", (ev) => {
      ev.stopPropagation();
      editor.deleteSpan(i);
    });
    row.appendChild(del);

    spanTable.appendChild(row);
  });
}

function renderDiagnostics(): void {
  diagnosticsEl.textContent = "";
  const all = [
    ...editor.diagnostics.map((d) => ({ ...d, from: "local" })),
    ...editor.serverDiagnostics.map((d) => ({ ...d, from: "server" })),
  ];
  for (const diag of all) {
    const li = document.createElement("li");
    li.className = diag.from === "server" ? "diag is-server" : "diag";
    li.textContent = `[${diag.kind}] ${diag.message}`;
    diagnosticsEl.appendChild(li);
  }
  if (editor.error) {
    const li = document.createElement("li");
    li.className = "diag is-server";
    li.textContent = editor.error;
    diagnosticsEl.appendChild(li);
  }
}

function renderPreview(): void {
  previewEl.textContent = "";
  if (editor.previewError) {
    const p = document.createElement("p");
    p.className = "preview-error";
    p.textContent = editor.previewError;
    previewEl.appendChild(p);
    return;
  }
  if (!editor.preview) return;
  const normalized = document.createElement("p");
  normalized.className = "normalized";
  normalized.textContent = editor.preview.normalized;
  previewEl.appendChild(normalized);
  const list = document.createElement("ol");
  for (const variant of editor.preview.variants) {
    const li = document.createElement("li");
    li.textContent = `${variant.text}  [keeps ${variant.kept_codes.map(codeName).join(", ")}]`;
    list.appendChild(li);
  }
  previewEl.appendChild(list);
}

function renderConflict(): void {
  conflictEl.textContent = "";
  conflictEl.hidden = editor.conflict === null;
  if (!editor.conflict) return;

  const head = document.createElement("p");
  head.textContent =
    `someone saved revision ${editor.conflict.actualRevision} while you edited ` +
    `revision ${editor.revision}; pick a side for each span`;
  conflictEl.appendChild(head);

  editor.conflict.rows.forEach((row, i) => {
    const div = document.createElement("div");
    div.className = "merge-row";
    (["mine", "theirs"] as const).forEach((side) => {
      const span = side === "mine" ? row.mine : row.theirs;
      const label = document.createElement("label");
      const radio = document.createElement("input");
      radio.type = "radio";
      radio.name = `merge-${i}`;
      radio.checked = row.pick === side;
      radio.addEventListener("change", () => editor.setMergePick(i, side));
      label.appendChild(radio);
      label.append(
        span
          ? ` ${side}: “${span.surface}” → “${span.norm}” (${span.codes.join(",")})`
          : ` ${side}: drop`,
      );
      div.appendChild(label);
    });
    conflictEl.appendChild(div);
  });

  const apply = document.createElement("button");
  apply.type = "button";
  apply.textContent = "merge and continue";
  apply.addEventListener("click", () => editor.applyMerge());
  conflictEl.appendChild(apply);

  const theirs = document.createElement("button");
  theirs.type = "button";
  theirs.textContent = "discard mine, take theirs";
  theirs.addEventListener("click", () => editor.discardForTheirs());
  conflictEl.appendChild(theirs);
}

function render(): void {
  renderRecordList();
  if (editor.record) {
    renderSource(sourceEl, editor.record.src, editor.spans, {
      selected: editor.selected,
      rejected: editor.rejectedOverlaps,
      draft: editor.draft,
    });
  } else {
    sourceEl.textContent = "";
  }
  renderPicker();
  renderSpanTable();
  renderDiagnostics();
  renderPreview();
  renderConflict();

  if (document.activeElement !== tgtNormEl) tgtNormEl.value = editor.tgtNorm;
  saveBtn.disabled = !editor.canSave;
  previewBtn.disabled = editor.record === null;

  if (editor.record) {
    const state = editor.dirty ? "edited" : "saved";
    statusEl.textContent = `${editor.record.id} · revision ${editor.revision} · ${state}`;
  } else {
    statusEl.textContent = "no record open";
  }
}

function onMouseUp(): void {
  const selection = document.getSelection();
  if (!selection || selection.rangeCount === 0) return;
  const offsets = rangeToCodepoints(sourceEl, selection.getRangeAt(0));
  if (!offsets) return;
  editor.selectSpan(offsets.start, offsets.end);
  selection.removeAllRanges();
}

let flushTimer: ReturnType<typeof setTimeout> | null = null;

function applyCodes(codes: number[]): void {
  for (const code of codes) {
    if (editor.draft) editor.toggleDraftCode(code);
    else if (editor.selected !== null) editor.toggleCode(editor.selected, code);
  }
}

function onKeyDown(ev: KeyboardEvent): void {
  const target = ev.target as HTMLElement | null;
  if (target && (target.tagName === "INPUT" || target.tagName === "TEXTAREA")) return;
  if (ev.key >= "0" && ev.key <= "9") {
    applyCodes(keypad.press(Number(ev.key)));
    if (flushTimer) clearTimeout(flushTimer);
    flushTimer = setTimeout(() => applyCodes(keypad.flush()), 400);
    ev.preventDefault();
  } else if (ev.key === "Escape") {
    editor.cancelDraft();
  } else if ((ev.key === "Delete" || ev.key === "Backspace") && editor.selected !== null) {
    editor.deleteSpan(editor.selected);
    ev.preventDefault();
  } else if (ev.key === "Enter" && editor.draft) {
    editor.commitDraft();
  }
}

async function boot(): Promise<void> {
  editor.subscribe(render);
  await editor.loadTypology();
  summaries = await api.summaries();
  render();
  const first = summaries[0];
  if (first) await editor.open(first.id);
}

sourceEl.addEventListener("mouseup", onMouseUp);
document.addEventListener("keydown", onKeyDown);
tgtNormEl.addEventListener("input", () => editor.setTgtNorm(tgtNormEl.value));
saveBtn.addEventListener("click", () => void editor.save());
previewBtn.addEventListener("click", () => void editor.refreshPreview());

void boot();
