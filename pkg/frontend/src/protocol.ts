/**
 * Wire types for the /v1/stream websocket, kept in the exact JSON shapes the
 * backend speaks. The UI sends stroke points, template arming, and config
 * changes; everything it displays comes back as one of the server kinds below.
 */

export const PROTOCOL_VERSION = 1;

export type Ranked = [letter: string, distance: number][];

export interface StrokePointMessage {
  v: 1;
  kind: "stroke_point";
  x: number;
  y: number;
  t_ms: number;
}

export interface PenUpMessage {
  v: 1;
  kind: "stroke_point";
  up: true;
  t_ms: number;
}

export interface BeginTemplateMessage {
  v: 1;
  kind: "begin_template";
  letter: string;
}

export interface SetConfigMessage {
  v: 1;
  kind: "set_config";
  letter_box_in: number;
}

export type ClientMessage =
  | StrokePointMessage
  | PenUpMessage
  | BeginTemplateMessage
  | SetConfigMessage;

export interface SessionStartMessage {
  v: 1;
  kind: "session_start";
  t_us: number;
}

export interface SessionEndMessage {
  v: 1;
  kind: "session_end";
  t_us: number;
  samples: number;
}

export interface PredictionMessage {
  v: 1;
  kind: "prediction";
  letter: string;
  ranked: Ranked;
}

export interface TemplateSavedMessage {
  v: 1;
  kind: "template_saved";
  letter: string;
  trained: number;
  missing: string[];
}

export interface ErrorMessage {
  v: 1;
  kind: "error";
  code: string;
  message: string;
  missing?: string[];
}

export type ServerMessage =
  | SessionStartMessage
  | SessionEndMessage
  | PredictionMessage
  | TemplateSavedMessage
  | ErrorMessage;

export function strokePoint(x: number, y: number, tMs: number): StrokePointMessage {
  return { v: 1, kind: "stroke_point", x, y, t_ms: tMs };
}

export function penUp(tMs: number): PenUpMessage {
  return { v: 1, kind: "stroke_point", up: true, t_ms: tMs };
}

export function beginTemplate(letter: string): BeginTemplateMessage {
  return { v: 1, kind: "begin_template", letter };
}

export function setConfig(letterBoxIn: number): SetConfigMessage {
  return { v: 1, kind: "set_config", letter_box_in: letterBoxIn };
}

function isFiniteNumber(value: unknown): value is number {
  return typeof value === "number" && Number.isFinite(value);
}

function isStringArray(value: unknown): value is string[] {
  return Array.isArray(value) && value.every((item) => typeof item === "string");
}

function isRanked(value: unknown): value is Ranked {
  return (
    Array.isArray(value) &&
    value.every(
      (entry) =>
        Array.isArray(entry) &&
        entry.length === 2 &&
        typeof entry[0] === "string" &&
        isFiniteNumber(entry[1]),
    )
  );
}

/**
 * Validate one incoming frame. Returns null for anything that is not a
 * well-formed v1 server message; the caller logs a diagnostic and leaves the
 * UI untouched, so a newer backend cannot wedge an older page.
 */
export function parseServerMessage(text: string): ServerMessage | null {
  let raw: unknown;
  try {
    raw = JSON.parse(text);
  } catch {
    return null;
  }
  if (typeof raw !== "object" || raw === null || Array.isArray(raw)) {
    return null;
  }
  const msg = raw as Record<string, unknown>;
  if (msg["v"] !== PROTOCOL_VERSION || typeof msg["kind"] !== "string") {
    return null;
  }
  switch (msg["kind"]) {
    case "session_start":
      if (!isFiniteNumber(msg["t_us"])) return null;
      return { v: 1, kind: "session_start", t_us: msg["t_us"] };
    case "session_end":
      if (!isFiniteNumber(msg["t_us"]) || !isFiniteNumber(msg["samples"])) return null;
      return { v: 1, kind: "session_end", t_us: msg["t_us"], samples: msg["samples"] };
    case "prediction":
      if (typeof msg["letter"] !== "string" || !isRanked(msg["ranked"])) return null;
      return { v: 1, kind: "prediction", letter: msg["letter"], ranked: msg["ranked"] };
    case "template_saved":
      if (
        typeof msg["letter"] !== "string" ||
        !isFiniteNumber(msg["trained"]) ||
        !isStringArray(msg["missing"])
      ) {
        return null;
      }
      return {
        v: 1,
        kind: "template_saved",
        letter: msg["letter"],
        trained: msg["trained"],
        missing: msg["missing"],
      };
    case "error": {
      if (typeof msg["code"] !== "string" || typeof msg["message"] !== "string") {
        return null;
      }
      const out: ErrorMessage = {
        v: 1,
        kind: "error",
        code: msg["code"],
        message: msg["message"],
      };
      if (msg["missing"] !== undefined) {
        if (!isStringArray(msg["missing"])) return null;
        out.missing = msg["missing"];
      }
      return out;
    }
    default:
      return null;
  }
}
