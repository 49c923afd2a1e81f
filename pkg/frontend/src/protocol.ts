// Wire messages, version 1. One JSON object per WebSocket text frame.

import type { Pose, Vec3 } from "./math.js";

export const PROTOCOL_VERSION = 1;

export interface FrameMsg {
  type: "frame";
  v: number;
  t: number;
  lm: Vec3[];
  intr: string;
}

export interface StateMsg {
  type: "state";
  v: number;
  t: number;
  gesture: string;
  probs: number[];
  mode: "idle" | "linear" | "angular" | "combined";
  tracking: boolean;
  hand: Pose;
  robot: Pose;
}

export interface ErrorMsg {
  type: "error";
  v: number;
  code: string;
  text: string;
}

export interface ConfigMsg {
  type: "config";
  v: number;
  [key: string]: unknown;
}

export type ServerMsg = StateMsg | ErrorMsg;

export function encodeFrame(t: number, lm: Vec3[], intr: string): string {
  const msg: FrameMsg = { type: "frame", v: PROTOCOL_VERSION, t, lm, intr };
  return JSON.stringify(msg);
}

export function encodeConfig(fields: Record<string, unknown>): string {
  return JSON.stringify({ type: "config", v: PROTOCOL_VERSION, ...fields });
}

/** Parse a server message; returns null for anything unusable. */
export function decodeServerMessage(raw: string): ServerMsg | null {
  let rec: unknown;
  try {
    rec = JSON.parse(raw);
  } catch {
    return null;
  }
  if (typeof rec !== "object" || rec === null) return null;
  const msg = rec as { type?: string; v?: number };
  if (msg.v !== PROTOCOL_VERSION) return null;
  if (msg.type === "state" || msg.type === "error") return rec as ServerMsg;
  return null;
}
