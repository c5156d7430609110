/* Request interception: the extension path. Danmaku responses matching
   the configured URL pattern are rewritten in place — summarize the
   file, fetch the mask, drop the flagged bullets — before the page's
   display code ever sees them. Any failure leaves the response
   untouched (fail-open). The demo page reuses the same hook against its
   own bundled file, so both modes run one code path. */

import { applyMask, ClientConfig, FetchLike, requestMask, summarize } from "./client";
import { parseDanmakuXml, serializeDanmakuXml } from "./danmaku";

export interface InterceptEvent {
  url: string;
  removed: number;
  warning?: string;
}

export type InterceptListener = (ev: InterceptEvent) => void;

export async function filterDanmakuXml(
  xmlText: string,
  cfg: ClientConfig,
  fetchFn: FetchLike = fetch,
): Promise<{ xml: string; removed: number; warning?: string }> {
  let comments: string[];
  try {
    comments = summarize(xmlText);
  } catch {
    return { xml: xmlText, removed: 0, warning: "response is not a danmaku file" };
  }
  const result = await requestMask(comments, cfg, fetchFn);
  if (!result.ok) {
    return { xml: xmlText, removed: 0, warning: result.warning };
  }
  const cleaned = applyMask(parseDanmakuXml(xmlText), result.mask);
  return {
    xml: serializeDanmakuXml(cleaned),
    removed: comments.length - cleaned.bullets.length,
  };
}

/**
 * Patch `win.fetch` and `win.XMLHttpRequest` so responses whose URL
 * matches cfg.danmakuUrlPattern flow through the filter. Returns an
 * uninstall function.
 */
export function installInterceptor(
  win: Window & typeof globalThis,
  cfg: ClientConfig,
  onIntercept?: InterceptListener,
): () => void {
  const pattern = new RegExp(cfg.danmakuUrlPattern ?? "danmaku|/d\\.xml|comment\\.bilibili\\.com");
  const originalFetch = win.fetch;
  const upstreamFetch: FetchLike = originalFetch.bind(win);

  const patchedFetch: FetchLike = async (url, init) => {
    const res = await upstreamFetch(url, init);
    if (!cfg.enabled || !pattern.test(String(url))) {
      return res;
    }
    const { xml, removed, warning } = await filterDanmakuXml(await res.text(), cfg, upstreamFetch);
    onIntercept?.({ url: String(url), removed, warning });
    return new win.Response(xml, {
      status: res.status,
      statusText: res.statusText,
      headers: res.headers,
    });
  };
  win.fetch = patchedFetch as typeof win.fetch;

  const XHR = win.XMLHttpRequest;
  const origOpen = XHR.prototype.open;
  const origSend = XHR.prototype.send;
  XHR.prototype.open = function (this: XMLHttpRequest, method: string, url: string, ...rest: any[]) {
    (this as any).__sb_url = String(url);
    return (origOpen as any).call(this, method, url, ...rest);
  };
  XHR.prototype.send = function (this: XMLHttpRequest, body?: any) {
    const url: string = (this as any).__sb_url ?? "";
    if (cfg.enabled && pattern.test(url)) {
      this.addEventListener("load", () => {
        const raw = this.responseText;
        void filterDanmakuXml(raw, cfg, upstreamFetch).then(({ xml, removed, warning }) => {
          Object.defineProperty(this, "responseText", { get: () => xml });
          Object.defineProperty(this, "response", { get: () => xml });
          onIntercept?.({ url, removed, warning });
          this.dispatchEvent(new win.Event("sb-filtered"));
        });
      });
    }
    return origSend.call(this, body);
  };

  return () => {
    win.fetch = originalFetch;
    XHR.prototype.open = origOpen;
    XHR.prototype.send = origSend;
  };
}
