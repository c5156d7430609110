/* Bullet layout and rendering over the placeholder video.
   Mode 1 scrolls right-to-left; modes 4/5 sit fixed at the bottom/top.
   Lane assignment and positioning are pure functions of time so the
   renderer can seek anywhere and tests need no DOM clock. */

import { DanmakuFile, DisplayBullet } from "./danmaku";

export interface RenderBullet extends DisplayBullet {
  lane: number;
  velocity: number; // px/s, mode-1 only
  width: number;    // measured text width in px
}

export interface LayoutOptions {
  screenWidth: number;
  laneHeight: number;
  laneCount: number;
  scrollSeconds: number; // time for a bullet to cross the screen
  fixedSeconds: number;  // dwell time of top/bottom bullets
  measure: (text: string, fontSize: number) => number;
}

export const DEFAULT_LAYOUT: Omit<LayoutOptions, "measure"> = {
  screenWidth: 960,
  laneHeight: 32,
  laneCount: 12,
  scrollSeconds: 8,
  fixedSeconds: 4,
};

/** Approximate width when no canvas is around (tests, first paint). */
export function approximateWidth(text: string, fontSize: number): number {
  let units = 0;
  for (const ch of text) {
    units += ch.charCodeAt(0) > 0x2e80 ? 1.0 : 0.55; // CJK vs latin
  }
  return Math.max(8, units * fontSize);
}

/**
 * Assign lanes so same-mode bullets never overlap: a scroll lane is free
 * once the previous bullet's tail has fully entered the screen; a fixed
 * lane is free once the previous bullet expired. Falls back to the
 * least-recently-used lane when everything is busy (bullets may then
 * overlap rather than disappear).
 */
export function assignLanes(file: DanmakuFile, opts: LayoutOptions): RenderBullet[] {
  const scrollFree: number[] = new Array(opts.laneCount).fill(-Infinity);
  const topFree: number[] = new Array(opts.laneCount).fill(-Infinity);
  const bottomFree: number[] = new Array(opts.laneCount).fill(-Infinity);

  const ordered = [...file.bullets].sort((a, b) => a.appearTime - b.appearTime);
  return ordered.map((b) => {
    const width = opts.measure(b.content, b.fontSize);
    const velocity = (opts.screenWidth + width) / opts.scrollSeconds;
    let lanes: number[];
    let freeAt: number;
    if (b.mode === 1) {
      lanes = scrollFree;
      // the tail enters the screen after width/velocity seconds
      freeAt = b.appearTime + width / velocity;
    } else {
      lanes = b.mode === 5 ? topFree : bottomFree;
      freeAt = b.appearTime + opts.fixedSeconds;
    }
    let lane = lanes.findIndex((t) => t <= b.appearTime);
    if (lane === -1) {
      lane = lanes.indexOf(Math.min(...lanes));
    }
    lanes[lane] = freeAt;
    return { ...b, lane, velocity, width };
  });
}

export interface BulletPosition {
  x: number;
  y: number;
  visible: boolean;
}

/** Deterministic position of one laid-out bullet at time t (seconds). */
export function positionAt(b: RenderBullet, t: number, opts: LayoutOptions): BulletPosition {
  const dt = t - b.appearTime;
  if (b.mode === 1) {
    const x = opts.screenWidth - dt * b.velocity;
    return {
      x,
      y: b.lane * opts.laneHeight,
      visible: dt >= 0 && x + b.width > 0,
    };
  }
  const visible = dt >= 0 && dt <= opts.fixedSeconds;
  const x = (opts.screenWidth - b.width) / 2;
  const y =
    b.mode === 5
      ? b.lane * opts.laneHeight
      : opts.laneCount * opts.laneHeight - (b.lane + 1) * opts.laneHeight;
  return { x, y, visible };
}

/** DOM overlay: one absolutely positioned <span> per visible bullet. */
export class DanmakuRenderer {
  private laid: RenderBullet[] = [];
  private nodes = new Map<RenderBullet, HTMLElement>();
  private opts: LayoutOptions;

  constructor(private container: HTMLElement, opts?: Partial<LayoutOptions>) {
    this.opts = {
      ...DEFAULT_LAYOUT,
      screenWidth: container.clientWidth || DEFAULT_LAYOUT.screenWidth,
      measure: (text, size) => approximateWidth(text, size),
      ...opts,
    };
  }

  setFile(file: DanmakuFile): void {
    this.laid = assignLanes(file, this.opts);
    for (const node of this.nodes.values()) {
      node.remove();
    }
    this.nodes.clear();
  }

  bulletCount(): number {
    return this.laid.length;
  }

  /** Reposition every bullet for time t; creates/removes DOM nodes lazily. */
  tick(t: number): void {
    for (const b of this.laid) {
      const pos = positionAt(b, t, this.opts);
      let node = this.nodes.get(b);
      if (pos.visible && !node) {
        node = this.container.ownerDocument.createElement("span");
        node.className = "bullet";
        node.textContent = b.content;
        node.style.fontSize = `${b.fontSize}px`;
        node.style.color = `#${b.color.toString(16).padStart(6, "0")}`;
        this.container.appendChild(node);
        this.nodes.set(b, node);
      }
      if (node) {
        if (!pos.visible) {
          node.remove();
          this.nodes.delete(b);
        } else {
          node.style.transform = `translate(${pos.x}px, ${pos.y}px)`;
        }
      }
    }
  }
}
