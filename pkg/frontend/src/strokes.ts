/**
 * Pointer capture. Turns pad events into stroke_point messages at the native
 * event rate and keeps a local log of finished strokes for rendering.
 */

import type { ClientMessage } from "./protocol.js";
import { penUp, strokePoint } from "./protocol.js";

export interface PadPoint {
  x: number;
  y: number;
  t_ms: number;
}

export interface PadStroke {
  points: PadPoint[];
  /** True once the pen lifted normally; aborted strokes are dropped instead. */
  completed: boolean;
}

function clampUnit(value: number): number {
  return Math.min(1, Math.max(0, value));
}

export class StrokeCapture {
  private current: PadPoint[] | null = null;
  private lastT = -Infinity;
  private log: PadStroke[] = [];

  /** Finished strokes, oldest first. */
  strokes(): readonly PadStroke[] {
    return this.log;
  }

  inStroke(): boolean {
    return this.current !== null;
  }

  down(x: number, y: number, tMs: number): ClientMessage[] {
    if (this.current === null) {
      this.current = [];
    }
    return this.append(x, y, tMs, true);
  }

  move(x: number, y: number, tMs: number): ClientMessage[] {
    if (this.current === null) {
      return [];
    }
    return this.append(x, y, tMs, false);
  }

  up(tMs: number): ClientMessage[] {
    if (this.current === null) {
      return [];
    }
    const t = Math.max(tMs, this.lastT + 1);
    this.lastT = t;
    // A completed stroke has at least two points; a bare tap is not kept,
    // though the pen-up marker still goes out so the far end sees the dwell.
    if (this.current.length >= 2) {
      this.log.push({ points: this.current, completed: true });
    }
    this.current = null;
    return [penUp(t)];
  }

  /** Discard the stroke in progress without telling anyone about it. */
  abort(): void {
    this.current = null;
  }

  private append(x: number, y: number, tMs: number, force: boolean): ClientMessage[] {
    // The backend requires strictly increasing timestamps. Repeated pointer
    // timestamps are dropped mid stroke and nudged forward on boundaries.
    let t = tMs;
    if (t <= this.lastT) {
      if (!force) {
        return [];
      }
      t = this.lastT + 1;
    }
    this.lastT = t;
    const point = { x: clampUnit(x), y: clampUnit(y), t_ms: t };
    this.current!.push(point);
    return [strokePoint(point.x, point.y, point.t_ms)];
  }
}
