/* Isolated-world content script: mirrors popup settings from
   chrome.storage into the MAIN world via postMessage. */

export {};
declare const chrome: any;

function push(settings: { enabled?: boolean; baseUrl?: string }) {
  window.postMessage({ source: "smartbullets-bridge", ...settings }, "*");
}

chrome.storage.local.get({ enabled: true, baseUrl: "http://127.0.0.1:8731" }, push);

chrome.storage.onChanged.addListener((changes: any, area: string) => {
  if (area !== "local") return;
  push({
    enabled: changes.enabled?.newValue,
    baseUrl: changes.baseUrl?.newValue,
  });
});
