/**
 * Pure UI state. Every change flows through reduce(), so the whole page can
 * be replayed from a message log. The text buffer is never assembled locally:
 * letters enter it only through prediction messages and leave it only through
 * explicit backspaces.
 */

import type { Ranked, ServerMessage } from "./protocol.js";

export const ALPHABET = "abcdefghijklmnopqrstuvwxyz";

export type Mode = "write" | "template_record";

export type Status = "connecting" | "open" | "closed";

export interface UiState {
  mode: Mode;
  /** Letter queued for the next template session, template mode only. */
  armedLetter: string | null;
  text: string;
  /** Full ranking from the latest prediction; the page renders the head. */
  ranked: Ranked;
  letterBoxIn: number;
  status: Status;
  banner: string | null;
  trained: number;
  /**
   * Best known untrained letters. Seeded pessimistically with the whole
   * alphabet and reconciled from template_saved and not_trained replies,
   * since the stream is the only channel to the backend.
   */
  missing: string[];
  sessionOpen: boolean;
  sessionPairs: number;
}

export type UiEvent =
  | { type: "server"; message: ServerMessage }
  | { type: "socket_open" }
  | { type: "socket_closed" }
  | { type: "backspace" }
  | { type: "set_mode"; mode: Mode }
  | { type: "arm_template"; letter: string }
  | { type: "set_box"; inches: number };

export function initialState(): UiState {
  return {
    mode: "write",
    armedLetter: null,
    text: "",
    ranked: [],
    letterBoxIn: 12,
    status: "connecting",
    banner: null,
    trained: 0,
    missing: ALPHABET.split(""),
    sessionOpen: false,
    sessionPairs: 0,
  };
}

function applyServer(state: UiState, message: ServerMessage): UiState {
  switch (message.kind) {
    case "session_start":
      return { ...state, sessionOpen: true };
    case "session_end":
      return { ...state, sessionOpen: false, sessionPairs: state.sessionPairs + 1 };
    case "prediction":
      return {
        ...state,
        text: state.text + message.letter,
        ranked: message.ranked,
        banner: null,
      };
    case "template_saved":
      return {
        ...state,
        armedLetter: null,
        trained: message.trained,
        missing: [...message.missing],
        banner: null,
      };
    case "error": {
      if (message.code === "not_trained") {
        const missing = message.missing ?? state.missing;
        return {
          ...state,
          missing: [...missing],
          trained: ALPHABET.length - missing.length,
          banner: `not trained yet, missing: ${missing.join(" ")}`,
        };
      }
      // Errors surface in the banner and never touch the composed text.
      return { ...state, banner: `${message.code}: ${message.message}` };
    }
  }
}

export function reduce(state: UiState, event: UiEvent): UiState {
  switch (event.type) {
    case "server":
      return applyServer(state, event.message);
    case "socket_open":
      return { ...state, status: "open", banner: null };
    case "socket_closed":
      return {
        ...state,
        status: "closed",
        sessionOpen: false,
        banner: "connection lost; the stroke in progress was discarded",
      };
    case "backspace":
      return { ...state, text: state.text.slice(0, -1) };
    case "set_mode":
      return { ...state, mode: event.mode, armedLetter: null };
    case "arm_template":
      return { ...state, mode: "template_record", armedLetter: event.letter };
    case "set_box":
      return { ...state, letterBoxIn: event.inches };
  }
}
