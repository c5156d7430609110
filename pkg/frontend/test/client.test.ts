import { describe, expect, it, vi } from "vitest";

import { applyMask, requestMask, summarize } from "../src/client";
import { parseDanmakuXml } from "../src/danmaku";

const CFG = { baseUrl: "http://filter.test", enabled: true, timeoutMs: 500 };

const THREE = `<i><chatid>9</chatid>
  <d p="1,1,25,0,0,0,h,r">first</d>
  <d p="2,1,25,0,0,0,h,r">second &amp; third</d>
  <d p="3,4,25,0,0,0,h,r">last</d>
</i>`;

function jsonResponse(doc: unknown, status = 200): Response {
  return new Response(JSON.stringify(doc), {
    status,
    headers: { "Content-Type": "application/json" },
  });
}

describe("summarize", () => {
  it("extracts contents in order", () => {
    expect(summarize(THREE)).toEqual(["first", "second & third", "last"]);
  });

  it("returns [] for an empty file", () => {
    expect(summarize("<i><chatid>1</chatid></i>")).toEqual([]);
  });
});

describe("requestMask", () => {
  it("applies the service mask on success", async () => {
    const fetchFn = vi.fn(async (_url: string, _init?: RequestInit) =>
      jsonResponse({ mask: [1, 0, 1], model_id: "m" }),
    );
    const result = await requestMask(["a", "b", "c"], CFG, fetchFn);
    expect(result).toEqual({ mask: [1, 0, 1], ok: true });
    expect(fetchFn).toHaveBeenCalledWith(
      "http://filter.test/v1/filter",
      expect.objectContaining({ method: "POST" }),
    );
    expect(JSON.parse(fetchFn.mock.calls[0][1]?.body as string)).toEqual({
      comments: ["a", "b", "c"],
    });
  });

  it("fails open when the service is down", async () => {
    const fetchFn = vi.fn(async () => {
      throw new TypeError("connect ECONNREFUSED");
    });
    const result = await requestMask(["a", "b"], CFG, fetchFn);
    expect(result.ok).toBe(false);
    expect(result.mask).toEqual([1, 1]);
    expect(result.warning).toMatch(/unreachable/);
  });

  it("fails open on non-200 responses", async () => {
    const fetchFn = vi.fn(async () => jsonResponse({ error: "busy" }, 503));
    const result = await requestMask(["a"], CFG, fetchFn);
    expect(result).toMatchObject({ ok: false, mask: [1] });
  });

  it("treats a length mismatch as an error", async () => {
    const fetchFn = vi.fn(async () => jsonResponse({ mask: [1] }));
    const result = await requestMask(["a", "b"], CFG, fetchFn);
    expect(result.ok).toBe(false);
    expect(result.mask).toEqual([1, 1]);
  });

  it("treats non-binary mask values as an error", async () => {
    const fetchFn = vi.fn(async () => jsonResponse({ mask: [1, 2] }));
    const result = await requestMask(["a", "b"], CFG, fetchFn);
    expect(result.ok).toBe(false);
  });

  it("treats invalid JSON as an error", async () => {
    const fetchFn = vi.fn(async () => new Response("not json", { status: 200 }));
    const result = await requestMask(["a"], CFG, fetchFn);
    expect(result).toMatchObject({ ok: false, mask: [1] });
  });
});

describe("applyMask", () => {
  const file = parseDanmakuXml(THREE);

  it("keeps exactly the mask-1 bullets as a subsequence", () => {
    const cleaned = applyMask(file, [1, 0, 1]);
    expect(cleaned.bullets.map((b) => b.content)).toEqual(["first", "last"]);
    expect(cleaned.videoId).toBe("9");
  });

  it("conserves bullets between kept and removed", () => {
    for (const mask of [[1, 1, 1], [0, 0, 0], [0, 1, 0]]) {
      const kept = applyMask(file, mask).bullets.length;
      const removed = mask.filter((v) => v === 0).length;
      expect(kept + removed).toBe(file.bullets.length);
    }
  });

  it("all-ones mask is the identity", () => {
    expect(applyMask(file, [1, 1, 1])).toEqual(file);
  });
});
