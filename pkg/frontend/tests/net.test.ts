import { describe, expect, it } from "vitest";
import { SessionClient, Transport, TransportEvents } from "../src/net";
import type { ErrorMessage, StateMessage } from "../src/protocol";
import { makeState } from "./fixtures";

class FakeWire {
  sent: { seq: number; command: unknown }[] = [];
  events!: TransportEvents;
  closed = false;

  factory = (events: TransportEvents): Transport => {
    this.events = events;
    queueMicrotask(() => events.onOpen());
    return {
      send: (line: string) => {
        const msg = JSON.parse(line);
        this.sent.push({ seq: msg.seq, command: msg.command });
      },
      close: () => {
        this.closed = true;
        this.events.onClose();
      },
    };
  };

  reply(seqAck: number): void {
    this.events.onLine(JSON.stringify(makeState({}, [], seqAck)));
  }

  replyError(seqAck: number, error: string): void {
    this.events.onLine(
      JSON.stringify({
        version: 1,
        kind: "error",
        session_id: "fixture",
        seq_ack: seqAck,
        error,
        message: "rejected",
      }),
    );
  }
}

function makeClient(wire: FakeWire) {
  const states: StateMessage[] = [];
  const errors: ErrorMessage[] = [];
  const statuses: boolean[] = [];
  const client = new SessionClient("fixture", wire.factory, {
    onState: (m) => states.push(m),
    onError: (m) => errors.push(m),
    onStatus: (c) => statuses.push(c),
  });
  return { client, states, errors, statuses };
}

async function settle(): Promise<void> {
  await new Promise((resolve) => setTimeout(resolve, 0));
}

describe("SessionClient", () => {
  it("attaches with seq 1 and a null command on open", async () => {
    const wire = new FakeWire();
    const { client, statuses } = makeClient(wire);
    client.connect();
    await settle();
    expect(wire.sent).toEqual([{ seq: 1, command: null }]);
    expect(statuses).toEqual([true]);
  });

  it("keeps at most one command in flight", async () => {
    const wire = new FakeWire();
    const { client, states } = makeClient(wire);
    client.connect();
    await settle();
    client.send({ kind: "move", direction: "north" });
    client.send({ kind: "move", direction: "east" });
    expect(wire.sent).toHaveLength(1); // both queued behind the attach
    wire.reply(1);
    expect(wire.sent).toHaveLength(2);
    expect(wire.sent[1]).toEqual({ seq: 2, command: { kind: "move", direction: "north" } });
    wire.reply(2);
    expect(wire.sent[2]).toEqual({ seq: 3, command: { kind: "move", direction: "east" } });
    wire.reply(3);
    expect(states).toHaveLength(3);
  });

  it("continues after a consumed-seq rejection", async () => {
    const wire = new FakeWire();
    const { client, errors } = makeClient(wire);
    client.connect();
    await settle();
    wire.reply(1);
    client.send({ kind: "acknowledge" });
    expect(wire.sent[1]?.seq).toBe(2);
    wire.replyError(2, "invalid_command"); // server consumed seq 2
    client.send({ kind: "move", direction: "south" });
    expect(wire.sent[2]?.seq).toBe(3);
    expect(errors).toHaveLength(1);
    expect(errors[0]?.error).toBe("invalid_command");
  });

  it("retries the rejected message after a stale-seq rejection", async () => {
    const wire = new FakeWire();
    const { client, states, errors } = makeClient(wire);
    client.connect();
    await settle();
    // Reconnecting to a long-lived session: the fresh attach's seq 1 is
    // stale, the error names the session's real cursor, the client
    // re-attaches there without surfacing an error.
    wire.replyError(41, "bad_seq");
    expect(wire.sent[1]).toEqual({ seq: 42, command: null });
    wire.reply(42);
    expect(states).toHaveLength(1);
    expect(errors).toHaveLength(0);
  });

  it("resynchronizes seq from an unconsumed-seq rejection", async () => {
    const wire = new FakeWire();
    const { client } = makeClient(wire);
    client.connect();
    await settle();
    wire.replyError(0, "parse_error"); // nothing consumed
    client.send({ kind: "move", direction: "west" });
    expect(wire.sent[1]?.seq).toBe(1);
  });

  it("ignores lines that do not decode", async () => {
    const wire = new FakeWire();
    const { client, states } = makeClient(wire);
    client.connect();
    await settle();
    wire.events.onLine("{garbage");
    wire.events.onLine("");
    wire.reply(1);
    expect(states).toHaveLength(1);
  });

  it("reports disconnects and drops the in-flight slot", async () => {
    const wire = new FakeWire();
    const { client, statuses } = makeClient(wire);
    client.connect();
    await settle();
    client.close();
    expect(wire.closed).toBe(true);
    expect(statuses).toEqual([true, false]);
    expect(client.connected).toBe(false);
  });
});
