/**
 * Digit-key dispatch for the 13 typology codes.
 *
 * Codes 2..9 commit on a single keypress. "1" is a prefix (11, 12 and
 * 13 exist), so it stays pending until the next digit settles it: 0..3
 * forms 10..13, anything else commits the bare 1 and then handles the
 * new digit on its own. The caller flushes pending input after a short
 * idle timeout, or when focus leaves the keyboard target.
 */

export class CodeKeypad {
  private pendingOne = false;

  /** Feed one digit; returns the codes committed by this press. */
  press(digit: number): number[] {
    if (!Number.isInteger(digit) || digit < 0 || digit > 9) return [];
    if (this.pendingOne) {
      this.pendingOne = false;
      if (digit <= 3) return [10 + digit];
      return [1, ...this.press(digit)];
    }
    if (digit === 1) {
      this.pendingOne = true;
      return [];
    }
    if (digit === 0) return []; // no code 0
    return [digit];
  }

  /** Commit a pending bare "1", if any. */
  flush(): number[] {
    if (!this.pendingOne) return [];
    this.pendingOne = false;
    return [1];
  }

  get pending(): boolean {
    return this.pendingOne;
  }
}
