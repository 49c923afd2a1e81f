// Wireframe renderer for the robot body: a box at the reported pose
// inside the workspace bounds, drawn on a 2D canvas with a fixed
// tilted-orthographic view. No external 3D dependency needed for a
// single box and a grid.

import { applyMatrix, eulerToMatrix, Mat3, Pose, Vec3 } from "./math.js";

// Drawn body box, meters (width, height, depth of the simulated body).
const BODY = { w: 0.3, h: 0.175, d: 0.24 };
const WORKSPACE = 0.1; // +/- translation limits drawn as the outer box

const VIEW: Mat3 = eulerToMatrix(-28, 38, 0);
const SCALE = 340; // px per meter

function project(p: Vec3, width: number, height: number): [number, number] {
  const r = applyMatrix(VIEW, p);
  return [width / 2 + r[0] * SCALE, height / 2 + r[1] * SCALE];
}

function boxCorners(cx: number, cy: number, cz: number, hw: number, hh: number, hd: number): Vec3[] {
  const out: Vec3[] = [];
  for (const sx of [-1, 1])
    for (const sy of [-1, 1])
      for (const sz of [-1, 1]) out.push([cx + sx * hw, cy + sy * hh, cz + sz * hd]);
  return out;
}

const BOX_EDGES: [number, number][] = [
  [0, 1], [0, 2], [0, 4], [1, 3], [1, 5], [2, 3], [2, 6], [3, 7],
  [4, 5], [4, 6], [5, 7], [6, 7],
];

function drawBox(
  ctx: CanvasRenderingContext2D,
  corners: Vec3[],
  width: number,
  height: number,
  style: string,
  lineWidth: number,
) {
  ctx.strokeStyle = style;
  ctx.lineWidth = lineWidth;
  ctx.beginPath();
  for (const [a, b] of BOX_EDGES) {
    const pa = project(corners[a], width, height);
    const pb = project(corners[b], width, height);
    ctx.moveTo(pa[0], pa[1]);
    ctx.lineTo(pb[0], pb[1]);
  }
  ctx.stroke();
}

export function renderRobot(canvas: HTMLCanvasElement, pose: Pose | null): void {
  const ctx = canvas.getContext("2d");
  if (!ctx) return;
  const { width, height } = canvas;
  ctx.clearRect(0, 0, width, height);

  drawBox(
    ctx,
    boxCorners(0, 0, 0, WORKSPACE + BODY.w / 2, WORKSPACE + BODY.h / 2, WORKSPACE + BODY.d / 2),
    width,
    height,
    "#3a4a5a",
    1,
  );

  if (!pose) return;
  const rot = eulerToMatrix(pose.rx, pose.ry, pose.rz);
  const corners = boxCorners(0, 0, 0, BODY.w / 2, BODY.h / 2, BODY.d / 2).map((c) => {
    const r = applyMatrix(rot, c);
    return [r[0] + pose.x, r[1] + pose.y, r[2] + pose.z] as Vec3;
  });
  drawBox(ctx, corners, width, height, "#4fd1c5", 2);

  // Heading marker on the +z face.
  const nose = applyMatrix(rot, [0, 0, BODY.d / 2 + 0.03]);
  const center = project([pose.x, pose.y, pose.z], width, height);
  const tip = project([nose[0] + pose.x, nose[1] + pose.y, nose[2] + pose.z], width, height);
  ctx.strokeStyle = "#f6ad55";
  ctx.lineWidth = 2;
  ctx.beginPath();
  ctx.moveTo(center[0], center[1]);
  ctx.lineTo(tip[0], tip[1]);
  ctx.stroke();
}
