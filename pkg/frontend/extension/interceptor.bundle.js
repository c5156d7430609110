"use strict";
(() => {
  // src/danmaku.ts
  var ENTITIES = {
    amp: "&",
    lt: "<",
    gt: ">",
    quot: '"',
    apos: "'"
  };
  function decodeEntities(text) {
    return text.replace(/&(#x?[0-9a-fA-F]+|[a-z]+);/g, (whole, body) => {
      if (body.startsWith("#x") || body.startsWith("#X")) {
        return String.fromCodePoint(parseInt(body.slice(2), 16));
      }
      if (body.startsWith("#")) {
        return String.fromCodePoint(parseInt(body.slice(1), 10));
      }
      return ENTITIES[body] ?? whole;
    });
  }
  function encodeEntities(text) {
    return text.replace(/&/g, "&amp;").replace(/</g, "&lt;").replace(/>/g, "&gt;").replace(/"/g, "&quot;");
  }
  function parseDanmakuXml(xml) {
    const cid = /<(?:chatid|oid)>\s*([^<]+?)\s*<\/(?:chatid|oid)>/.exec(xml);
    if (!/<i[\s>]/.test(xml) || !cid) {
      throw new Error("not a danmaku file: missing <i> root or <chatid>");
    }
    const bullets = [];
    const re = /<d\s+p="([^"]*)"\s*(?:\/>|>([\s\S]*?)<\/d>)/g;
    let m;
    while ((m = re.exec(xml)) !== null) {
      const parts = decodeEntities(m[1]).split(",");
      if (parts.length < 8) {
        throw new Error(`bullet ${bullets.length}: p attribute has ${parts.length} fields`);
      }
      bullets.push({
        appearTime: Number(parts[0]),
        mode: Number(parts[1]),
        fontSize: Number(parts[2]),
        color: Number(parts[3]),
        sendTimestamp: Number(parts[4]),
        pool: Number(parts[5]),
        userHash: parts[6],
        rowId: parts.slice(7).join(","),
        content: decodeEntities(m[2] ?? "")
      });
    }
    return { videoId: cid[1], bullets };
  }
  function serializeDanmakuXml(file) {
    const items = file.bullets.map((b) => {
      const p = [
        String(b.appearTime),
        String(b.mode),
        String(b.fontSize),
        String(b.color),
        String(b.sendTimestamp),
        String(b.pool),
        b.userHash,
        b.rowId
      ].join(",");
      return `<d p="${encodeEntities(p)}">${encodeEntities(b.content)}</d>`;
    });
    return `<?xml version='1.0' encoding='utf-8'?>
<i><chatid>${encodeEntities(
      file.videoId
    )}</chatid>${items.join("")}</i>`;
  }

  // src/client.ts
  function summarize(xmlText) {
    return parseDanmakuXml(xmlText).bullets.map((b) => b.content);
  }
  function allOnes(n, warning) {
    return { mask: new Array(n).fill(1), ok: false, warning };
  }
  async function requestMask(comments, cfg2, fetchFn = fetch) {
    const controller = new AbortController();
    const timer = setTimeout(() => controller.abort(), cfg2.timeoutMs ?? 1e4);
    try {
      const res = await fetchFn(`${cfg2.baseUrl}/v1/filter`, {
        method: "POST",
        headers: { "Content-Type": "application/json" },
        body: JSON.stringify({ comments }),
        signal: controller.signal
      });
      if (!res.ok) {
        return allOnes(comments.length, `filter service returned ${res.status}`);
      }
      const doc = await res.json();
      const mask = doc?.mask;
      if (!Array.isArray(mask) || mask.length !== comments.length || !mask.every((v) => v === 0 || v === 1)) {
        return allOnes(comments.length, "filter service sent an invalid mask");
      }
      return { mask, ok: true };
    } catch (err) {
      return allOnes(comments.length, `filter service unreachable: ${String(err)}`);
    } finally {
      clearTimeout(timer);
    }
  }
  function applyMask(file, mask) {
    return {
      videoId: file.videoId,
      bullets: file.bullets.filter((_, i) => mask[i] === 1)
    };
  }

  // src/interceptor.ts
  async function filterDanmakuXml(xmlText, cfg2, fetchFn = fetch) {
    let comments;
    try {
      comments = summarize(xmlText);
    } catch {
      return { xml: xmlText, removed: 0, warning: "response is not a danmaku file" };
    }
    const result = await requestMask(comments, cfg2, fetchFn);
    if (!result.ok) {
      return { xml: xmlText, removed: 0, warning: result.warning };
    }
    const cleaned = applyMask(parseDanmakuXml(xmlText), result.mask);
    return {
      xml: serializeDanmakuXml(cleaned),
      removed: comments.length - cleaned.bullets.length
    };
  }
  function installInterceptor(win, cfg2, onIntercept) {
    const pattern = new RegExp(cfg2.danmakuUrlPattern ?? "danmaku|/d\\.xml|comment\\.bilibili\\.com");
    const upstreamFetch = win.fetch.bind(win);
    const patchedFetch = async (url, init) => {
      const res = await upstreamFetch(url, init);
      if (!cfg2.enabled || !pattern.test(String(url))) {
        return res;
      }
      const { xml, removed, warning } = await filterDanmakuXml(await res.text(), cfg2, upstreamFetch);
      onIntercept?.({ url: String(url), removed, warning });
      return new win.Response(xml, {
        status: res.status,
        statusText: res.statusText,
        headers: res.headers
      });
    };
    win.fetch = patchedFetch;
    const XHR = win.XMLHttpRequest;
    const origOpen = XHR.prototype.open;
    const origSend = XHR.prototype.send;
    XHR.prototype.open = function(method, url, ...rest) {
      this.__sb_url = String(url);
      return origOpen.call(this, method, url, ...rest);
    };
    XHR.prototype.send = function(body) {
      const url = this.__sb_url ?? "";
      if (cfg2.enabled && pattern.test(url)) {
        this.addEventListener("load", () => {
          const raw = this.responseText;
          void filterDanmakuXml(raw, cfg2, upstreamFetch).then(({ xml, removed, warning }) => {
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
      win.fetch = upstreamFetch;
      XHR.prototype.open = origOpen;
      XHR.prototype.send = origSend;
    };
  }

  // src/extension/main.ts
  var cfg = {
    baseUrl: "http://127.0.0.1:8731",
    enabled: true,
    danmakuUrlPattern: "comment\\.bilibili\\.com|/dm/|danmaku|\\.xml(\\?|$)"
  };
  installInterceptor(window, cfg, (ev) => {
    if (ev.warning) {
      console.warn(`[smartbullets] ${ev.warning} (showing all bullets)`);
    } else {
      console.info(`[smartbullets] removed ${ev.removed} low-quality bullets from ${ev.url}`);
    }
  });
  window.addEventListener("message", (event) => {
    const data = event.data;
    if (event.source !== window || !data || data.source !== "smartbullets-bridge") {
      return;
    }
    if (typeof data.enabled === "boolean")
      cfg.enabled = data.enabled;
    if (typeof data.baseUrl === "string" && data.baseUrl)
      cfg.baseUrl = data.baseUrl;
  });
})();
