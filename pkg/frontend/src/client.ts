/* Filter-service client. Fail-open is the contract: whatever goes wrong
   (network, HTTP status, bad payload, length mismatch), the caller gets
   an all-ones mask plus a warning string and playback continues with
   every bullet visible. */

import { DanmakuFile, parseDanmakuXml } from "./danmaku";

export interface ClientConfig {
  baseUrl: string;
  enabled: boolean;
  danmakuUrlPattern?: string;
  timeoutMs?: number;
}

export interface MaskResult {
  mask: number[];
  ok: boolean;
  warning?: string;
}

export type FetchLike = (url: string, init?: RequestInit) => Promise<Response>;

/** Ordered comment list of a danmaku file; index i belongs to bullet i. */
export function summarize(xmlText: string): string[] {
  return parseDanmakuXml(xmlText).bullets.map((b) => b.content);
}

function allOnes(n: number, warning: string): MaskResult {
  return { mask: new Array(n).fill(1), ok: false, warning };
}

export async function requestMask(
  comments: string[],
  cfg: ClientConfig,
  fetchFn: FetchLike = fetch,
): Promise<MaskResult> {
  const controller = new AbortController();
  const timer = setTimeout(() => controller.abort(), cfg.timeoutMs ?? 10000);
  try {
    const res = await fetchFn(`${cfg.baseUrl}/v1/filter`, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify({ comments }),
      signal: controller.signal,
    });
    if (!res.ok) {
      return allOnes(comments.length, `filter service returned ${res.status}`);
    }
    const doc = await res.json();
    const mask = doc?.mask;
    if (
      !Array.isArray(mask) ||
      mask.length !== comments.length ||
      !mask.every((v: unknown) => v === 0 || v === 1)
    ) {
      return allOnes(comments.length, "filter service sent an invalid mask");
    }
    return { mask, ok: true };
  } catch (err) {
    return allOnes(comments.length, `filter service unreachable: ${String(err)}`);
  } finally {
    clearTimeout(timer);
  }
}

/** Keep exactly the bullets whose mask entry is 1, order preserved. */
export function applyMask(file: DanmakuFile, mask: number[]): DanmakuFile {
  return {
    videoId: file.videoId,
    bullets: file.bullets.filter((_, i) => mask[i] === 1),
  };
}

export async function checkHealth(cfg: ClientConfig, fetchFn: FetchLike = fetch): Promise<boolean> {
  try {
    const res = await fetchFn(`${cfg.baseUrl}/v1/health`);
    return res.ok;
  } catch {
    return false;
  }
}
