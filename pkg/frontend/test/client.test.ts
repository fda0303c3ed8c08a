import { afterEach, describe, expect, it, vi } from "vitest";

import { PadSession } from "../src/client.js";
import { FakeSocket } from "./fake_socket.js";

afterEach(() => {
  vi.restoreAllMocks();
});

describe("PadSession", () => {
  it("marks the store open for an already-open socket", () => {
    const session = new PadSession(new FakeSocket());
    expect(session.store.getState().status).toBe("open");
  });

  it("sends begin_template and set_config on the control actions", () => {
    const socket = new FakeSocket();
    const session = new PadSession(socket);
    session.armTemplate("k");
    session.setLetterBox(6);
    expect(socket.sentMessages()).toEqual([
      { v: 1, kind: "begin_template", letter: "k" },
      { v: 1, kind: "set_config", letter_box_in: 6 },
    ]);
    expect(session.store.getState().armedLetter).toBe("k");
    expect(session.store.getState().letterBoxIn).toBe(6);
  });

  it("folds server frames into state in arrival order", () => {
    const socket = new FakeSocket();
    const session = new PadSession(socket);
    socket.emit({ v: 1, kind: "session_start", t_us: 0 });
    socket.emit({ v: 1, kind: "session_end", t_us: 9, samples: 4 });
    socket.emit({ v: 1, kind: "prediction", letter: "w", ranked: [["w", 0.5]] });
    const state = session.store.getState();
    expect(state.text).toBe("w");
    expect(state.sessionPairs).toBe(1);
  });

  it("logs and ignores frames it does not understand", () => {
    const warn = vi.spyOn(console, "warn").mockImplementation(() => {});
    const socket = new FakeSocket();
    const session = new PadSession(socket);
    const before = session.store.getState();
    socket.emit({ v: 1, kind: "telemetry", payload: 42 });
    expect(session.store.getState()).toEqual(before);
    expect(warn).toHaveBeenCalledTimes(1);
  });

  it("never writes to a closed socket", () => {
    const socket = new FakeSocket();
    const session = new PadSession(socket);
    socket.drop();
    session.pointerDown(0.5, 0.5, 10);
    session.pointerMove(0.6, 0.5, 20);
    session.pointerUp(30);
    session.armTemplate("a");
    expect(socket.sent).toEqual([]);
    expect(session.store.getState().status).toBe("closed");
  });
});
