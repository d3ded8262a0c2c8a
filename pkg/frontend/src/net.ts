// Session client: seq bookkeeping, one command in flight at a time, and
// reconnect callbacks. The transport is injected so tests can drive it
// with a fake and node tests can use a TCP socket; the browser uses the
// WebSocket factory below.

import {
  Command,
  ClientMessage,
  PROTOCOL_VERSION,
  ServerMessage,
  StateMessage,
  ErrorMessage,
  decodeServerMessage,
  encodeClientMessage,
} from "./protocol";

export interface Transport {
  send(line: string): void;
  close(): void;
}

export interface TransportEvents {
  onOpen(): void;
  onLine(line: string): void;
  onClose(): void;
}

export type TransportFactory = (events: TransportEvents) => Transport;

export interface ClientHandlers {
  onState(msg: StateMessage): void;
  onError?(msg: ErrorMessage): void;
  onStatus?(connected: boolean): void;
}

export class SessionClient {
  readonly sessionId: string;
  private factory: TransportFactory;
  private handlers: ClientHandlers;
  private transport: Transport | null = null;
  private seqAck = 0; // highest seq the server has consumed
  private inFlight = false;
  private pending: Command | null | undefined = undefined; // message awaiting its reply
  private queue: Command[] = [];

  constructor(sessionId: string, factory: TransportFactory, handlers: ClientHandlers) {
    this.sessionId = sessionId;
    this.factory = factory;
    this.handlers = handlers;
  }

  connect(): void {
    this.transport = this.factory({
      onOpen: () => {
        this.handlers.onStatus?.(true);
        this.transmit(null); // attach
      },
      onLine: (line) => this.receive(line),
      onClose: () => {
        this.transport = null;
        this.inFlight = false;
        this.handlers.onStatus?.(false);
      },
    });
  }

  close(): void {
    this.transport?.close();
  }

  get connected(): boolean {
    return this.transport !== null;
  }

  // Queue a command; it goes on the wire once the previous one is acked.
  send(command: Command): void {
    this.queue.push(command);
    this.pump();
  }

  private pump(): void {
    if (this.inFlight || !this.transport) return;
    const next = this.queue.shift();
    if (next === undefined) return;
    this.transmit(next);
  }

  private transmit(command: Command | null): void {
    if (!this.transport) return;
    const msg: ClientMessage = {
      version: PROTOCOL_VERSION,
      session_id: this.sessionId,
      seq: this.seqAck + 1,
      command,
    };
    this.inFlight = true;
    this.pending = command;
    this.transport.send(encodeClientMessage(msg));
  }

  private receive(line: string): void {
    const trimmed = line.trim();
    if (trimmed === "") return;
    let msg: ServerMessage;
    try {
      msg = decodeServerMessage(trimmed);
    } catch {
      return; // not ours to crash the page over
    }
    this.seqAck = msg.seq_ack;
    this.inFlight = false;
    const failed = this.pending;
    this.pending = undefined;
    if (msg.kind === "state") {
      this.handlers.onState(msg);
    } else if (msg.error === "bad_seq" && failed !== undefined) {
      // Nothing was consumed and seq_ack told us where the session is,
      // so resend the same message (a reconnect attach lands here).
      this.transmit(failed);
      return;
    } else {
      this.handlers.onError?.(msg);
    }
    this.pump();
  }
}

export function webSocketTransport(url: string): TransportFactory {
  return (events) => {
    const ws = new WebSocket(url);
    ws.addEventListener("open", () => events.onOpen());
    ws.addEventListener("message", (ev) => {
      if (typeof ev.data === "string") events.onLine(ev.data);
    });
    ws.addEventListener("close", () => events.onClose());
    ws.addEventListener("error", () => ws.close());
    return {
      send: (line) => ws.send(line),
      close: () => ws.close(),
    };
  };
}
