/* Popup: enable switch + service status, persisted in chrome.storage. */

export {};
declare const chrome: any;

const toggle = document.getElementById("enabled") as HTMLInputElement;
const urlField = document.getElementById("base-url") as HTMLInputElement;
const status = document.getElementById("status") as HTMLElement;

async function refreshStatus(baseUrl: string) {
  try {
    const res = await fetch(`${baseUrl}/v1/health`);
    const doc = await res.json();
    status.textContent = res.ok ? `service ok (model ${doc.model_id})` : "service degraded";
  } catch {
    status.textContent = "service unreachable — filter fails open";
  }
}

chrome.storage.local.get(
  { enabled: true, baseUrl: "http://127.0.0.1:8731" },
  (settings: { enabled: boolean; baseUrl: string }) => {
    toggle.checked = settings.enabled;
    urlField.value = settings.baseUrl;
    void refreshStatus(settings.baseUrl);
  },
);

toggle.addEventListener("change", () => {
  chrome.storage.local.set({ enabled: toggle.checked });
});

urlField.addEventListener("change", () => {
  chrome.storage.local.set({ baseUrl: urlField.value });
  void refreshStatus(urlField.value);
});
