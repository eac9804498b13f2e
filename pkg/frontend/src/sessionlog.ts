// Rolling session log of received events, downloadable as JSON lines.

export class SessionLog {
  private lines: string[] = [];
  constructor(private limit = 5000) {}

  record(raw: string): void {
    this.lines.push(raw);
    if (this.lines.length > this.limit) {
      this.lines.splice(0, this.lines.length - this.limit);
    }
  }

  get size(): number {
    return this.lines.length;
  }

  toBlobText(): string {
    return this.lines.join("\n") + "\n";
  }

  download(doc: Document): void {
    const blob = new Blob([this.toBlobText()], { type: "application/jsonl" });
    const a = doc.createElement("a");
    a.href = URL.createObjectURL(blob);
    a.download = "teleop-session.jsonl";
    a.click();
    URL.revokeObjectURL(a.href);
  }
}
