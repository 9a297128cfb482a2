// Transports carry NDJSON lines to the session service and hand back the
// NDJSON responses. The browser speaks to the HTTP bridge (POST /api); tests
// under node talk straight TCP. Same bytes either way.

import { decodeLines, encodeLine, type ClientMessage, type ServerMessage } from './protocol.js';

export interface Transport {
  send(messages: ClientMessage[]): Promise<ServerMessage[]>;
  close(): void;
}

export class HttpTransport implements Transport {
  constructor(private baseUrl: string = '') {}

  async send(messages: ClientMessage[]): Promise<ServerMessage[]> {
    if (messages.length === 0) return [];
    const body = messages.map(encodeLine).join('\n') + '\n';
    const resp = await fetch(`${this.baseUrl}/api`, {
      method: 'POST',
      headers: { 'Content-Type': 'application/x-ndjson' },
      body,
    });
    if (!resp.ok) throw new Error(`bridge error: HTTP ${resp.status}`);
    return decodeLines(await resp.text());
  }

  close(): void {}
}

/**
 * Serializing queue on top of a transport: samples and control messages go
 * out FIFO, one batch in flight at a time, responses delivered in order.
 */
export class MessageQueue {
  private pending: ClientMessage[] = [];
  private inflight = false;
  private seq = 0;

  constructor(
    private transport: Transport,
    private onMessage: (msg: ServerMessage) => void,
    private onSendError: (err: unknown) => void = () => {},
  ) {}

  nextSeq(): number {
    this.seq += 1;
    return this.seq;
  }

  enqueue(msg: ClientMessage): void {
    this.pending.push(msg);
    void this.flush();
  }

  private async flush(): Promise<void> {
    if (this.inflight || this.pending.length === 0) return;
    this.inflight = true;
    const batch = this.pending;
    this.pending = [];
    try {
      const responses = await this.transport.send(batch);
      for (const msg of responses) this.onMessage(msg);
    } catch (err) {
      this.onSendError(err);
    } finally {
      this.inflight = false;
      if (this.pending.length > 0) void this.flush();
    }
  }
}
