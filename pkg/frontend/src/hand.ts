// The virtual hand: a gesture template posed in 6 DoF, synthesized into
// wire-valid landmark frames. Templates come from templates.json, which
// the service's `gen-dataset --templates-out` exports, so classifier and
// console always agree on the canonical shapes.

import { inBounds, Intrinsics, placeHand, Pose, projectPoints, Vec3 } from "./math.js";

export interface TemplatesFile {
  format: string;
  version: number;
  intrinsics: Intrinsics & { id: string };
  hand_distance: number;
  edges: [number, number][];
  templates: Record<string, Vec3[]>;
  fixtures: {
    facing: { gesture: string; pose: Pose; uvz: Vec3[] };
    posed: { gesture: string; pose: Pose; uvz: Vec3[] };
    rotation_matrix: { euler: [number, number, number]; matrix: number[][] };
  };
}

export interface VirtualHand {
  gesture: string;
  pose: Pose;
}

export type SynthesisResult =
  | { ok: true; uvz: Vec3[] }
  | { ok: false; reason: string };

export function loadTemplates(data: unknown): TemplatesFile {
  const file = data as TemplatesFile;
  if (file?.format !== "handteleop-templates" || file.version !== 1) {
    throw new Error("not a handteleop templates file");
  }
  return file;
}

/**
 * Landmarks for the posed hand, or a refusal when any landmark would
 * leave the image (the frame must not be sent in that case).
 */
export function synthesizeFrame(
  hand: VirtualHand,
  templates: TemplatesFile,
): SynthesisResult {
  const template = templates.templates[hand.gesture];
  if (!template) return { ok: false, reason: `unknown gesture ${hand.gesture}` };
  if (hand.pose.z <= 0.05) return { ok: false, reason: "hand too close to the camera" };
  const uvz = projectPoints(placeHand(template, hand.pose), templates.intrinsics);
  if (!inBounds(uvz, templates.intrinsics)) {
    return { ok: false, reason: "hand outside the camera image" };
  }
  return { ok: true, uvz };
}

export const GESTURES = ["One", "Two", "Three", "Open", "Close"] as const;
