/**
 * Golden replay against a recorded backend transcript. The fixture was
 * captured by frontend/test/fixtures/generate.py: a pointer log that writes
 * c, a, k, e, the messages a faithful client must emit for it, and the
 * backend replies, idle closes included.
 */

import { readFileSync } from "node:fs";

import { describe, expect, it } from "vitest";

import { PadSession } from "../src/client.js";
import type { ServerMessage } from "../src/protocol.js";
import { FakeSocket } from "./fake_socket.js";

interface PointerRecord {
  type: "down" | "move" | "up";
  x?: number;
  y?: number;
  t_ms: number;
}

interface Fixture {
  word: string;
  letter_box_in: number;
  pointer_log: PointerRecord[];
  client_messages: unknown[];
  server_transcript: ServerMessage[];
}

const fixture = JSON.parse(
  readFileSync(new URL("./fixtures/cake_replay.json", import.meta.url), "utf8"),
) as Fixture;

function replayPointer(session: PadSession, record: PointerRecord): void {
  if (record.type === "down") {
    session.pointerDown(record.x!, record.y!, record.t_ms);
  } else if (record.type === "move") {
    session.pointerMove(record.x!, record.y!, record.t_ms);
  } else {
    session.pointerUp(record.t_ms);
  }
}

describe("recorded cake replay", () => {
  it("the pointer log produces exactly the recorded client messages", () => {
    const socket = new FakeSocket();
    const session = new PadSession(socket);
    for (const record of fixture.pointer_log) {
      replayPointer(session, record);
    }
    expect(socket.sentMessages()).toEqual(fixture.client_messages);
  });

  it("the transcript yields the text 'cake' and four session pairs", () => {
    const socket = new FakeSocket();
    const session = new PadSession(socket);
    // Each pen lift is followed by that letter's slice of the transcript,
    // the way replies landed between letters when the log was recorded.
    const perLetter = fixture.server_transcript.length / fixture.word.length;
    expect(Number.isInteger(perLetter)).toBe(true);
    let served = 0;
    for (const record of fixture.pointer_log) {
      replayPointer(session, record);
      if (record.type === "up") {
        for (let i = 0; i < perLetter; i++) {
          socket.emit(fixture.server_transcript[served++]);
        }
        expect(session.store.getState().text).toBe(
          fixture.word.slice(0, session.store.getState().text.length),
        );
      }
    }
    expect(served).toBe(fixture.server_transcript.length);

    const state = session.store.getState();
    expect(state.text).toBe("cake");
    expect(state.sessionPairs).toBe(4);
    expect(state.sessionOpen).toBe(false);
    expect(state.banner).toBeNull();
    // The ranking panel shows the final letter's full ordering, best first.
    expect(state.ranked).toHaveLength(26);
    expect(state.ranked[0]![0]).toBe("e");
    const distances = state.ranked.map(([, d]) => d);
    expect([...distances].sort((a, b) => a - b)).toEqual(distances);
  });

  it("disconnect mid-stroke shows the banner and no phantom prediction", () => {
    const socket = new FakeSocket();
    const session = new PadSession(socket);
    const firstUp = fixture.pointer_log.findIndex((r) => r.type === "up");
    expect(firstUp).toBeGreaterThan(10);
    // Pen is still down partway through the first letter when the link dies.
    for (const record of fixture.pointer_log.slice(0, firstUp - 5)) {
      replayPointer(session, record);
    }
    const sentBefore = socket.sent.length;
    socket.drop();

    let state = session.store.getState();
    expect(state.status).toBe("closed");
    expect(state.banner).toContain("connection lost");

    // Finishing the gesture now must stay local: nothing is sent, nothing
    // is buffered for replay, and no letter ever appears.
    session.pointerUp(99_999);
    session.pointerMove(0.5, 0.5, 100_000);
    state = session.store.getState();
    expect(socket.sent.length).toBe(sentBefore);
    expect(session.capture.strokes()).toHaveLength(0);
    expect(session.capture.inStroke()).toBe(false);
    expect(state.text).toBe("");
    expect(state.sessionPairs).toBe(0);
  });
});
