// Latest-value mailbox decoupling message ingestion from rendering: the
// render loop takes at most one (the newest) value per frame, older
// values are overwritten unread.

export class Mailbox<T> {
  private value: T | null = null;

  put(v: T): void {
    this.value = v;
  }

  /** Returns the newest value and empties the box. */
  take(): T | null {
    const v = this.value;
    this.value = null;
    return v;
  }

  peek(): T | null {
    return this.value;
  }
}
