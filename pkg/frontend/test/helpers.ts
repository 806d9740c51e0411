/**
 * Test doubles. FakeAnnotationServer reimplements the annotation API
 * in memory with the same status codes, body shapes and validation
 * rules as the real store, so editor tests exercise the full HTTP
 * round trip without a running backend. Canned payloads below were
 * captured from the live server against the bundled corpus; tests
 * assert against them byte for byte to keep the fake honest.
 */

import type { Diagnostic, Transport, TypologyEntry, WireRecord, WireSpan } from "../src/api.js";
import { codepointLength, codepointSlice } from "../src/offsets.js";

export const TYPOLOGY: TypologyEntry[] = [
  { code: 1, name: "letter-del/add", description: "letters dropped, added or swapped" },
  { code: 2, name: "missing-diacritics", description: "missing or wrong diacritics" },
  { code: 3, name: "phonetic-writing", description: "word spelled the way it sounds" },
  { code: 4, name: "tokenization", description: "words split or glued together" },
  { code: 5, name: "wrong-tense", description: "wrong verb tense" },
  { code: 6, name: "special-char", description: "hashtag, mention or URL" },
  { code: 7, name: "agreement", description: "gender or number agreement error" },
  { code: 8, name: "casing", description: "inconsistent upper/lower casing" },
  { code: 9, name: "emoji", description: "emoji or emoticon" },
  { code: 10, name: "named-entity", description: "named entity" },
  { code: 11, name: "contraction", description: "contracted or abbreviated form" },
  { code: 12, name: "repetition/stretching", description: "stretched letters or punctuation" },
  { code: 13, name: "interjections", description: "interjection" },
];

/** Bundled record sample-002, verbatim. */
export const SAMPLE_002: WireRecord = {
  id: "sample-002",
  src: "#CaMeVénèreQuand le matin a 7h on me parle alors que je suis pas encore réveiller.",
  tgt: "#ItAnnoysMeWhen in the moring at 7 am someone talks to me although I didn't wake up yet.",
  tgt_norm: "in the moring at 7 am someone talks to me although I didn't wake up yet.",
  revision: 0,
  spans: [
    { start: 0, end: 16, codes: [6], norm: "" },
    { start: 26, end: 27, codes: [2], norm: "à" },
    { start: 72, end: 82, codes: [5], norm: "réveillé." },
  ],
};

export const SAMPLE_002_NORMALIZED = "le matin à 7h on me parle alors que je suis pas encore réveillé.";

/** Record with astral characters ahead of the interesting span. */
export const EMOJI_RECORD: WireRecord = {
  id: "emoji-001",
  src: "mdrrr 😂🤣 la vidéo est trooop drole",
  tgt: "lool 😂🤣 the video is sooo funny",
  tgt_norm: "the video is so funny",
  revision: 0,
  spans: [
    { start: 0, end: 5, codes: [12], norm: "mdr" },
    { start: 6, end: 8, codes: [9], norm: "" },
  ],
};

export function clone<T>(value: T): T {
  return JSON.parse(JSON.stringify(value)) as T;
}

export function jsonResponse(status: number, body: unknown): Response {
  return new Response(JSON.stringify(body), {
    status,
    headers: { "Content-Type": "application/json; charset=utf-8" },
  });
}

/** Space collapsing applied after span substitution, as the store does. */
export function collapseSpaces(text: string): string {
  return text.replace(/ {2,}/g, " ").replace(/^ +| +$/g, "");
}

export function substituteSpans(src: string, spans: WireSpan[], keep: Set<number>): string {
  const parts: string[] = [];
  let pos = 0;
  spans.forEach((sp, i) => {
    parts.push(codepointSlice(src, pos, sp.start));
    parts.push(keep.has(i) ? codepointSlice(src, sp.start, sp.end) : sp.norm);
    pos = sp.end;
  });
  parts.push(codepointSlice(src, pos, codepointLength(src)));
  return collapseSpaces(parts.join(""));
}

function spanDiagnostics(src: string, tgtNorm: string, spans: WireSpan[]): Diagnostic[] {
  const diags: Diagnostic[] = [];
  const n = codepointLength(src);
  if (!tgtNorm) diags.push({ kind: "empty-target", message: "tgt_norm must be non-empty", spans: [] });
  spans.forEach((sp, i) => {
    if (!sp.codes.length || new Set(sp.codes).size !== sp.codes.length) {
      diags.push({ kind: "malformed-line", message: `span ${i}: bad codes`, spans: [i] });
    }
    for (const c of sp.codes) {
      if (!Number.isInteger(c) || c < 1 || c > 13) {
        diags.push({ kind: "unknown-code", message: `span ${i}: code ${c} is not in 1..13`, spans: [i] });
      }
    }
    if (!(0 <= sp.start && sp.start < sp.end && sp.end <= n)) {
      diags.push({ kind: "offsets-out-of-range", message: `span ${i}: out of range`, spans: [i] });
    } else if (sp.surface !== undefined && sp.surface !== codepointSlice(src, sp.start, sp.end)) {
      diags.push({ kind: "surface-mismatch", message: `span ${i}: surface mismatch`, spans: [i] });
    }
  });
  for (let i = 1; i < spans.length; i++) {
    const prev = spans[i - 1]!;
    const cur = spans[i]!;
    if (cur.start < prev.start || (cur.start === prev.start && cur.end < prev.end)) {
      diags.push({ kind: "malformed-line", message: `spans ${i - 1} and ${i} unsorted`, spans: [i - 1, i] });
    } else if (cur.start < prev.end) {
      diags.push({ kind: "overlapping-spans", message: `spans ${i - 1} and ${i} overlap`, spans: [i - 1, i] });
    }
  }
  return diags;
}

export class FakeAnnotationServer {
  records = new Map<string, WireRecord>();
  requests: { method: string; path: string; body: any }[] = [];

  constructor(records: WireRecord[]) {
    for (const record of records) this.records.set(record.id, clone(record));
  }

  /** Record as served: spans grow surfaces, normalized source attached. */
  toApi(record: WireRecord): WireRecord {
    const out = clone(record);
    for (const sp of out.spans) sp.surface = codepointSlice(out.src, sp.start, sp.end);
    out.src_normalized = substituteSpans(out.src, out.spans, new Set());
    return out;
  }

  transport: Transport = async (url, init) => {
    const method = init?.method ?? "GET";
    const path = url.replace(/^https?:\/\/[^/]+/, "");
    const body = init?.body ? JSON.parse(init.body as string) : null;
    this.requests.push({ method, path, body });

    if (method === "GET" && path === "/api/typology") return jsonResponse(200, TYPOLOGY);
    if (method === "GET" && path === "/api/corpus") {
      const summaries = [...this.records.values()].map((r) => ({
        id: r.id,
        src: r.src.slice(0, 80),
        span_count: r.spans.length,
        revision: r.revision,
      }));
      return jsonResponse(200, summaries);
    }

    let m = path.match(/^\/api\/records\/([^/]+)$/);
    if (m) {
      const record = this.records.get(decodeURIComponent(m[1]!));
      if (!record) return jsonResponse(404, { error: `no record ${m[1]}` });
      if (method === "GET") return jsonResponse(200, this.toApi(record));
      if (method === "PUT") return this.update(record, body);
    }

    if (method === "POST" && path === "/api/preview") return this.preview(body);
    return jsonResponse(404, { error: `no route for ${path}` });
  };

  private update(current: WireRecord, body: any): Response {
    if (!body || body.expected_revision === undefined) {
      return jsonResponse(422, {
        error: "validation failed",
        diagnostics: [{ kind: "malformed-line", message: "update body must carry 'expected_revision'", spans: [] }],
      });
    }
    if (body.expected_revision !== current.revision) {
      return jsonResponse(409, {
        error: "revision conflict",
        expected_revision: body.expected_revision,
        actual_revision: current.revision,
        record: this.toApi(current),
      });
    }
    const candidate: WireRecord = {
      ...clone(current),
      tgt_norm: body.tgt_norm ?? current.tgt_norm,
      spans: clone(body.spans ?? current.spans),
      revision: current.revision + 1,
    };
    const diags = spanDiagnostics(candidate.src, candidate.tgt_norm, candidate.spans);
    if (diags.length) return jsonResponse(422, { error: "validation failed", diagnostics: diags });
    for (const sp of candidate.spans) delete sp.surface; // stored shape
    this.records.set(candidate.id, candidate);
    return jsonResponse(200, this.toApi(candidate));
  }

  private preview(body: any): Response {
    const raw = body?.record;
    if (!raw) return jsonResponse(400, { error: "preview body must carry a 'record' object" });
    const spans: WireSpan[] = raw.spans ?? [];
    const diags = spanDiagnostics(raw.src ?? "", raw.tgt_norm ?? "-", spans);
    if (diags.length) return jsonResponse(422, { error: "validation failed", diagnostics: diags });
    const variants = spans.map((sp, i) => ({
      text: substituteSpans(raw.src, spans, new Set([i])),
      kept: [i],
      kept_codes: [...sp.codes],
      n: 1,
      pure: true,
    }));
    return jsonResponse(200, {
      normalized: substituteSpans(raw.src, spans, new Set()),
      label: "n=1",
      truncated: false,
      variants,
    });
  }
}

/** Transport that replays a fixed queue of responses. */
export function cannedTransport(responses: Response[]): Transport {
  const queue = [...responses];
  return async () => {
    const next = queue.shift();
    if (!next) throw new Error("canned transport exhausted");
    return next;
  };
}
