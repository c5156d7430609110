/* MAIN-world content script: hooks the page's fetch/XHR so danmaku
   responses are filtered before the site's player renders them. The
   isolated-world bridge posts settings changes from the popup. */

import { ClientConfig } from "../client";
import { installInterceptor } from "../interceptor";

const cfg: ClientConfig = {
  baseUrl: "http://127.0.0.1:8731",
  enabled: true,
  danmakuUrlPattern: "comment\\.bilibili\\.com|/dm/|danmaku|\\.xml(\\?|$)",
};

installInterceptor(window, cfg, (ev) => {
  if (ev.warning) {
    console.warn(`[smartbullets] ${ev.warning} (showing all bullets)`);
  } else {
    console.info(`[smartbullets] removed ${ev.removed} low-quality bullets from ${ev.url}`);
  }
});

window.addEventListener("message", (event: MessageEvent) => {
  const data = event.data;
  if (event.source !== window || !data || data.source !== "smartbullets-bridge") {
    return;
  }
  if (typeof data.enabled === "boolean") cfg.enabled = data.enabled;
  if (typeof data.baseUrl === "string" && data.baseUrl) cfg.baseUrl = data.baseUrl;
});
