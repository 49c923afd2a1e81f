// Console state: a pure reducer over server messages. The console never
// predicts or simulates locally; every displayed robot pose originated
// in a state message.

import type { Pose } from "./math.js";
import type { ServerMsg, StateMsg } from "./protocol.js";

export type Connection = "disconnected" | "connecting" | "connected";

export interface ConsoleState {
  connection: Connection;
  last: StateMsg | null;
  lastError: { code: string; text: string } | null;
  history: { t: number; robot: Pose }[];
}

export const HISTORY_LIMIT = 300;

export function initialState(): ConsoleState {
  return { connection: "disconnected", last: null, lastError: null, history: [] };
}

export function setConnection(state: ConsoleState, connection: Connection): ConsoleState {
  // A fresh connection starts a fresh session on the server.
  if (connection === "connecting") {
    return { ...initialState(), connection };
  }
  return { ...state, connection };
}

/** Fold one server message in; stale or out-of-order states are ignored. */
export function applyMessage(state: ConsoleState, msg: ServerMsg): ConsoleState {
  if (msg.type === "error") {
    return { ...state, lastError: { code: msg.code, text: msg.text } };
  }
  if (state.last !== null && msg.t <= state.last.t) {
    return state;
  }
  const history = [...state.history, { t: msg.t, robot: msg.robot }];
  if (history.length > HISTORY_LIMIT) history.splice(0, history.length - HISTORY_LIMIT);
  return { ...state, last: msg, lastError: null, history };
}
