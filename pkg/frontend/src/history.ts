// Navigation history: a stack with a cursor. Selecting pushes (consecutive
// duplicates collapse, a push after going back drops the forward tail);
// back/forward only move the cursor.

export class NavigationHistory {
  private stack: string[] = [];
  private cursor = -1;

  current(): string | null {
    return this.cursor >= 0 ? this.stack[this.cursor] : null;
  }

  push(id: string): void {
    if (this.current() === id) return;
    this.stack = this.stack.slice(0, this.cursor + 1);
    this.stack.push(id);
    this.cursor = this.stack.length - 1;
  }

  canBack(): boolean {
    return this.cursor > 0;
  }

  canForward(): boolean {
    return this.cursor >= 0 && this.cursor < this.stack.length - 1;
  }

  back(): string | null {
    if (!this.canBack()) return null;
    this.cursor -= 1;
    return this.stack[this.cursor];
  }

  forward(): string | null {
    if (!this.canForward()) return null;
    this.cursor += 1;
    return this.stack[this.cursor];
  }

  entries(): readonly string[] {
    return this.stack;
  }
}
