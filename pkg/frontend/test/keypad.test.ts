import { describe, expect, it } from "vitest";

import { CodeKeypad } from "../src/keypad.js";

describe("CodeKeypad", () => {
  it("commits 2..9 immediately", () => {
    const pad = new CodeKeypad();
    for (let d = 2; d <= 9; d++) expect(pad.press(d)).toEqual([d]);
    expect(pad.pending).toBe(false);
  });

  it("holds 1 as a prefix for the teens", () => {
    const pad = new CodeKeypad();
    expect(pad.press(1)).toEqual([]);
    expect(pad.pending).toBe(true);
    expect(pad.press(0)).toEqual([10]);
    expect(pad.press(1)).toEqual([]);
    expect(pad.press(1)).toEqual([11]);
    expect(pad.press(1)).toEqual([]);
    expect(pad.press(2)).toEqual([12]);
    expect(pad.press(1)).toEqual([]);
    expect(pad.press(3)).toEqual([13]);
  });

  it("commits the bare 1 when the next digit cannot extend it", () => {
    const pad = new CodeKeypad();
    expect(pad.press(1)).toEqual([]);
    expect(pad.press(5)).toEqual([1, 5]);
    expect(pad.pending).toBe(false);
  });

  it("flushes a pending 1 on timeout", () => {
    const pad = new CodeKeypad();
    pad.press(1);
    expect(pad.flush()).toEqual([1]);
    expect(pad.flush()).toEqual([]);
  });

  it("ignores 0 with nothing pending, there is no code 0", () => {
    const pad = new CodeKeypad();
    expect(pad.press(0)).toEqual([]);
    expect(pad.flush()).toEqual([]);
  });

  it("every reachable code is one of the 13", () => {
    for (let a = 0; a <= 9; a++) {
      for (let b = 0; b <= 9; b++) {
        const pad = new CodeKeypad();
        const committed = [...pad.press(a), ...pad.press(b), ...pad.flush()];
        for (const code of committed) {
          expect(code).toBeGreaterThanOrEqual(1);
          expect(code).toBeLessThanOrEqual(13);
        }
      }
    }
  });
});
