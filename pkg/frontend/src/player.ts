/* Demo player: a placeholder video pane with scrolling bullets, a filter
   ON/OFF switch, removed-count badge, service URL field, and a warning
   badge whenever the service misbehaves (fail-open keeps all bullets). */

import { applyMask, ClientConfig, FetchLike, requestMask, summarize } from "./client";
import { DanmakuFile, parseDanmakuXml } from "./danmaku";
import { DanmakuRenderer } from "./renderer";

export interface FilterOutcome {
  file: DanmakuFile;
  removed: number;
  warning?: string;
}

/**
 * Filtering state machine, DOM-free so tests can drive it directly.
 * At most one mask request is relevant at a time: toggling while a
 * request is in flight bumps the generation counter and the stale
 * response is ignored.
 */
export class PlayerState {
  original: DanmakuFile | null = null;
  current: DanmakuFile | null = null;
  enabled = false;
  warning: string | undefined;
  private generation = 0;

  load(xmlText: string): DanmakuFile {
    this.original = parseDanmakuXml(xmlText);
    this.current = this.original;
    this.enabled = false;
    this.warning = undefined;
    this.generation += 1;
    return this.original;
  }

  get removedCount(): number {
    if (!this.original || !this.current) return 0;
    return this.original.bullets.length - this.current.bullets.length;
  }

  /** Toggle filtering; resolves to the file that should be displayed. */
  async setEnabled(on: boolean, cfg: ClientConfig, fetchFn: FetchLike = fetch): Promise<FilterOutcome> {
    if (!this.original) {
      throw new Error("no danmaku file loaded");
    }
    this.enabled = on;
    const gen = ++this.generation;
    if (!on) {
      this.current = this.original;
      this.warning = undefined;
      return { file: this.original, removed: 0 };
    }
    const comments = this.original.bullets.map((b) => b.content);
    const result = await requestMask(comments, cfg, fetchFn);
    if (gen !== this.generation) {
      // a newer toggle superseded this request; keep whatever it decided
      return { file: this.current ?? this.original, removed: this.removedCount, warning: this.warning };
    }
    this.current = applyMask(this.original, result.mask);
    this.warning = result.warning;
    return { file: this.current, removed: this.removedCount, warning: result.warning };
  }
}

interface PlayerElements {
  screen: HTMLElement;
  toggle: HTMLInputElement;
  serviceUrl: HTMLInputElement;
  removedBadge: HTMLElement;
  warningBadge: HTMLElement;
  playPause: HTMLButtonElement;
  seek: HTMLInputElement;
  clock: HTMLElement;
}

function grab(doc: Document): PlayerElements {
  const get = <T extends HTMLElement>(id: string) => {
    const el = doc.getElementById(id);
    if (!el) throw new Error(`demo page is missing #${id}`);
    return el as T;
  };
  return {
    screen: get("screen"),
    toggle: get<HTMLInputElement>("filter-toggle"),
    serviceUrl: get<HTMLInputElement>("service-url"),
    removedBadge: get("removed-badge"),
    warningBadge: get("warning-badge"),
    playPause: get<HTMLButtonElement>("play-pause"),
    seek: get<HTMLInputElement>("seek"),
    clock: get("clock"),
  };
}

export interface Player {
  state: PlayerState;
  renderer: DanmakuRenderer;
  refresh(): Promise<void>;
  play(): void;
  pause(): void;
  seekTo(t: number): void;
  readonly time: number;
}

/** Wire the demo page. `fetchFn` is injectable for tests. */
export async function initPlayer(
  doc: Document,
  danmakuUrl: string,
  fetchFn: FetchLike = fetch,
): Promise<Player> {
  const els = grab(doc);
  const state = new PlayerState();
  const renderer = new DanmakuRenderer(els.screen);

  const res = await fetchFn(danmakuUrl);
  state.load(await res.text());
  renderer.setFile(state.current!);

  const duration = 30;
  let playing = false;
  let time = 0;
  let lastFrame = 0;

  const cfg = (): ClientConfig => ({
    baseUrl: els.serviceUrl.value.replace(/\/+$/, ""),
    enabled: els.toggle.checked,
  });

  const updateBadges = () => {
    els.removedBadge.textContent = `removed: ${state.removedCount}`;
    els.warningBadge.textContent = state.warning ?? "";
    els.warningBadge.style.display = state.warning ? "inline-block" : "none";
  };

  const refresh = async () => {
    const outcome = await state.setEnabled(els.toggle.checked, cfg(), fetchFn);
    renderer.setFile(outcome.file);
    renderer.tick(time);
    updateBadges();
  };

  const frame = (now: number) => {
    if (playing) {
      time = (time + (now - lastFrame) / 1000) % duration;
      lastFrame = now;
      els.seek.value = String(time);
      els.clock.textContent = `${time.toFixed(1)}s`;
      renderer.tick(time);
      doc.defaultView!.requestAnimationFrame(frame);
    }
  };

  const player: Player = {
    state,
    renderer,
    refresh,
    play() {
      if (!playing) {
        playing = true;
        lastFrame = doc.defaultView!.performance.now();
        doc.defaultView!.requestAnimationFrame(frame);
        els.playPause.textContent = "pause";
      }
    },
    pause() {
      playing = false;
      els.playPause.textContent = "play";
    },
    seekTo(t: number) {
      time = t;
      els.clock.textContent = `${time.toFixed(1)}s`;
      renderer.tick(time);
    },
    get time() {
      return time;
    },
  };

  els.toggle.addEventListener("change", () => void refresh());
  els.playPause.addEventListener("click", () => (playing ? player.pause() : player.play()));
  els.seek.addEventListener("input", () => player.seekTo(Number(els.seek.value)));
  updateBadges();
  renderer.tick(0);
  return player;
}
