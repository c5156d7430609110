"use strict";
(() => {
  // src/extension/bridge.ts
  function push(settings) {
    window.postMessage({ source: "smartbullets-bridge", ...settings }, "*");
  }
  chrome.storage.local.get({ enabled: true, baseUrl: "http://127.0.0.1:8731" }, push);
  chrome.storage.onChanged.addListener((changes, area) => {
    if (area !== "local")
      return;
    push({
      enabled: changes.enabled?.newValue,
      baseUrl: changes.baseUrl?.newValue
    });
  });
})();
