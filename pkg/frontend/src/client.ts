/**
 * Glue between one websocket, the stroke capture, and the state store. All
 * recognition happens on the other end of the socket; this side only forwards
 * pointer samples and folds replies into UiState.
 */

import type { ClientMessage } from "./protocol.js";
import { beginTemplate, parseServerMessage, setConfig } from "./protocol.js";
import type { Mode, UiEvent, UiState } from "./state.js";
import { initialState, reduce } from "./state.js";
import { StrokeCapture } from "./strokes.js";

/** The slice of the browser WebSocket API the session needs; tests fake it. */
export interface SocketLike {
  readyState?: number;
  send(data: string): void;
  close(): void;
  onopen: (() => void) | null;
  onmessage: ((event: { data: unknown }) => void) | null;
  onclose: (() => void) | null;
}

const SOCKET_OPEN = 1;

export type Listener = (state: UiState) => void;

export class Store {
  private state = initialState();
  private listeners: Listener[] = [];

  getState(): UiState {
    return this.state;
  }

  dispatch(event: UiEvent): void {
    this.state = reduce(this.state, event);
    for (const listener of this.listeners) {
      listener(this.state);
    }
  }

  subscribe(listener: Listener): () => void {
    this.listeners.push(listener);
    return () => {
      this.listeners = this.listeners.filter((item) => item !== listener);
    };
  }
}

export class PadSession {
  readonly store: Store;
  readonly capture = new StrokeCapture();
  private socketOpen: boolean;

  constructor(
    private socket: SocketLike,
    store: Store = new Store(),
  ) {
    this.store = store;
    this.socketOpen = socket.readyState === SOCKET_OPEN;
    if (this.socketOpen) {
      store.dispatch({ type: "socket_open" });
    }
    socket.onopen = () => {
      this.socketOpen = true;
      this.store.dispatch({ type: "socket_open" });
    };
    socket.onmessage = (event) => this.onText(String(event.data));
    socket.onclose = () => {
      this.socketOpen = false;
      // Whatever was mid flight stays lost; replaying stale strokes against
      // a fresh connection would fabricate input the user never confirmed.
      this.capture.abort();
      this.store.dispatch({ type: "socket_closed" });
    };
  }

  pointerDown(x: number, y: number, tMs: number): void {
    this.sendAll(this.capture.down(x, y, tMs));
  }

  pointerMove(x: number, y: number, tMs: number): void {
    this.sendAll(this.capture.move(x, y, tMs));
  }

  pointerUp(tMs: number): void {
    this.sendAll(this.capture.up(tMs));
  }

  backspace(): void {
    this.store.dispatch({ type: "backspace" });
  }

  setMode(mode: Mode): void {
    this.store.dispatch({ type: "set_mode", mode });
  }

  armTemplate(letter: string): void {
    this.store.dispatch({ type: "arm_template", letter });
    this.sendAll([beginTemplate(letter)]);
  }

  setLetterBox(inches: number): void {
    this.store.dispatch({ type: "set_box", inches });
    this.sendAll([setConfig(inches)]);
  }

  private onText(text: string): void {
    const message = parseServerMessage(text);
    if (message === null) {
      console.warn("ignoring unrecognized server message:", text);
      return;
    }
    this.store.dispatch({ type: "server", message });
  }

  private sendAll(messages: ClientMessage[]): void {
    if (!this.socketOpen) {
      return;
    }
    for (const message of messages) {
      this.socket.send(JSON.stringify(message));
    }
  }
}
