// Test-side plumbing: spawn the real session service and speak the NDJSON
// protocol over TCP from node (browsers use the HTTP bridge; the bytes are
// the same).

import { spawn, spawnSync, type ChildProcess } from 'node:child_process';
import net from 'node:net';
import path from 'node:path';
import readline from 'node:readline';
import { encodeLine, type ClientMessage, type ServerMessage } from '../src/protocol.js';

export const REPO_ROOT = path.resolve(__dirname, '..', '..');
export const PYTHON = process.env.GAZEDOC_PYTHON ?? 'python3';

export interface ServiceHandle {
  proc: ChildProcess;
  port: number;
  stop(): void;
}

export async function startService(): Promise<ServiceHandle> {
  const proc = spawn(PYTHON, ['-m', 'gazedoc.cli', 'serve', '--port', '0'], {
    cwd: REPO_ROOT,
    stdio: ['ignore', 'pipe', 'pipe'],
  });
  const rl = readline.createInterface({ input: proc.stdout! });
  const port = await new Promise<number>((resolve, reject) => {
    const timer = setTimeout(() => reject(new Error('service did not start')), 15000);
    rl.on('line', (line) => {
      const m = line.match(/listening on tcp:\/\/127\.0\.0\.1:(\d+)/);
      if (m) {
        clearTimeout(timer);
        resolve(Number(m[1]));
      }
    });
    proc.on('exit', (code) => reject(new Error(`service exited early (${code})`)));
  });
  return {
    proc,
    port,
    stop() {
      proc.kill('SIGTERM');
    },
  };
}

/** One-message-at-a-time TCP client; resolves on the terminal response. */
export class TcpClient {
  private sock: net.Socket;
  private buffer = '';
  private inbox: ServerMessage[] = [];
  private waiters: Array<(msg: ServerMessage) => void> = [];

  private constructor(sock: net.Socket) {
    this.sock = sock;
    sock.on('data', (chunk) => {
      this.buffer += chunk.toString('utf-8');
      let idx;
      while ((idx = this.buffer.indexOf('\n')) >= 0) {
        const line = this.buffer.slice(0, idx).trim();
        this.buffer = this.buffer.slice(idx + 1);
        if (!line) continue;
        const msg = JSON.parse(line) as ServerMessage;
        const waiter = this.waiters.shift();
        if (waiter) waiter(msg);
        else this.inbox.push(msg); // lines can arrive before the next read
      }
    });
  }

  static connect(port: number): Promise<TcpClient> {
    return new Promise((resolve, reject) => {
      const sock = net.createConnection({ host: '127.0.0.1', port }, () => {
        sock.setNoDelay(true); // per-sample round trips; Nagle would add 40 ms each
        resolve(new TcpClient(sock));
      });
      sock.on('error', reject);
    });
  }

  private readOne(): Promise<ServerMessage> {
    const queued = this.inbox.shift();
    if (queued) return Promise.resolve(queued);
    return new Promise((resolve) => this.waiters.push(resolve));
  }

  /** Send one message; collect responses through its terminal message. */
  async send(msg: ClientMessage): Promise<ServerMessage[]> {
    this.sock.write(encodeLine(msg) + '\n');
    const terminal =
      msg.kind === 'create_session'
        ? new Set(['session_created', 'error'])
        : msg.kind === 'end_session'
          ? new Set(['events', 'error'])
          : new Set(['scene_delta', 'error']);
    const out: ServerMessage[] = [];
    for (;;) {
      const m = await this.readOne();
      out.push(m);
      if (terminal.has(m.kind)) return out;
    }
  }

  close(): void {
    this.sock.end();
  }
}

export function runCli(args: string[], cwd: string): { status: number; stdout: string; stderr: string } {
  const res = spawnSync(PYTHON, ['-m', 'gazedoc.cli', ...args], {
    cwd: REPO_ROOT,
    encoding: 'utf-8',
    env: { ...process.env },
  });
  return { status: res.status ?? -1, stdout: res.stdout, stderr: res.stderr };
}
