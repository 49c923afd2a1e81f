// Pose math mirroring the service's camera-frame conventions: x right,
// y down, z forward; angles in degrees, fixed-axis about x, then y
// (sign-flipped), then z. templates.json ships fixtures that pin this
// file against the server implementation.

export interface Pose {
  x: number;
  y: number;
  z: number;
  rx: number;
  ry: number;
  rz: number;
}

export interface Intrinsics {
  fx: number;
  fy: number;
  cx: number;
  cy: number;
  width: number;
  height: number;
}

export type Vec3 = [number, number, number];
export type Mat3 = [Vec3, Vec3, Vec3];

const DEG = Math.PI / 180;

export function identityPose(z = 0): Pose {
  return { x: 0, y: 0, z, rx: 0, ry: 0, rz: 0 };
}

export function matMul(a: Mat3, b: Mat3): Mat3 {
  const out: Mat3 = [
    [0, 0, 0],
    [0, 0, 0],
    [0, 0, 0],
  ];
  for (let i = 0; i < 3; i++)
    for (let j = 0; j < 3; j++)
      out[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j] + a[i][2] * b[2][j];
  return out;
}

export function eulerToMatrix(rx: number, ry: number, rz: number): Mat3 {
  const [ax, ay, az] = [rx * DEG, ry * DEG, rz * DEG];
  const [cx, sx] = [Math.cos(ax), Math.sin(ax)];
  const [cy, sy] = [Math.cos(ay), Math.sin(ay)];
  const [cz, sz] = [Math.cos(az), Math.sin(az)];
  const rotX: Mat3 = [
    [1, 0, 0],
    [0, cx, -sx],
    [0, sx, cx],
  ];
  // Sign-flipped y rotation (see module note).
  const rotY: Mat3 = [
    [cy, 0, -sy],
    [0, 1, 0],
    [sy, 0, cy],
  ];
  const rotZ: Mat3 = [
    [cz, -sz, 0],
    [sz, cz, 0],
    [0, 0, 1],
  ];
  return matMul(rotZ, matMul(rotY, rotX));
}

export function applyMatrix(m: Mat3, v: Vec3): Vec3 {
  return [
    m[0][0] * v[0] + m[0][1] * v[1] + m[0][2] * v[2],
    m[1][0] * v[0] + m[1][1] * v[1] + m[1][2] * v[2],
    m[2][0] * v[0] + m[2][1] * v[1] + m[2][2] * v[2],
  ];
}

/** Rotate a metric template by the pose angles and move it to the pose position. */
export function placeHand(template: Vec3[], pose: Pose): Vec3[] {
  const rot = eulerToMatrix(pose.rx, pose.ry, pose.rz);
  return template.map((p) => {
    const r = applyMatrix(rot, p);
    return [r[0] + pose.x, r[1] + pose.y, r[2] + pose.z];
  });
}

/** Pinhole projection to [u, v, depth]; depth must be positive. */
export function projectPoints(points: Vec3[], intr: Intrinsics): Vec3[] {
  return points.map(([x, y, z]) => {
    if (z <= 0) throw new Error(`point behind the camera, z=${z}`);
    return [(intr.fx * x) / z + intr.cx, (intr.fy * y) / z + intr.cy, z];
  });
}

export function inBounds(uvz: Vec3[], intr: Intrinsics): boolean {
  return uvz.every(([u, v]) => u >= 0 && u < intr.width && v >= 0 && v < intr.height);
}
