"use strict";
(() => {
  // src/extension/popup.ts
  var toggle = document.getElementById("enabled");
  var urlField = document.getElementById("base-url");
  var status = document.getElementById("status");
  async function refreshStatus(baseUrl) {
    try {
      const res = await fetch(`${baseUrl}/v1/health`);
      const doc = await res.json();
      status.textContent = res.ok ? `service ok (model ${doc.model_id})` : "service degraded";
    } catch {
      status.textContent = "service unreachable \u2014 filter fails open";
    }
  }
  chrome.storage.local.get(
    { enabled: true, baseUrl: "http://127.0.0.1:8731" },
    (settings) => {
      toggle.checked = settings.enabled;
      urlField.value = settings.baseUrl;
      void refreshStatus(settings.baseUrl);
    }
  );
  toggle.addEventListener("change", () => {
    chrome.storage.local.set({ enabled: toggle.checked });
  });
  urlField.addEventListener("change", () => {
    chrome.storage.local.set({ baseUrl: urlField.value });
    void refreshStatus(urlField.value);
  });
})();
