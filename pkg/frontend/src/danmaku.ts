/* Danmaku XML handling shared by the demo player and the interceptor.
   The format matches the backend: root <i>, a <chatid> (or <oid>) video id,
   and bullets as <d p="time,mode,size,color,ts,pool,hash,row">text</d>.
   A small scanner instead of DOMParser so the same code runs in content
   scripts, the demo page, and node tests. */

export interface DisplayBullet {
  appearTime: number;
  mode: number; // 1 scroll, 4 bottom, 5 top
  fontSize: number;
  color: number;
  sendTimestamp: number;
  pool: number;
  userHash: string;
  rowId: string;
  content: string;
}

export interface DanmakuFile {
  videoId: string;
  bullets: DisplayBullet[];
}

const ENTITIES: Record<string, string> = {
  amp: "&",
  lt: "<",
  gt: ">",
  quot: '"',
  apos: "'",
};

export function decodeEntities(text: string): string {
  return text.replace(/&(#x?[0-9a-fA-F]+|[a-z]+);/g, (whole, body: string) => {
    if (body.startsWith("#x") || body.startsWith("#X")) {
      return String.fromCodePoint(parseInt(body.slice(2), 16));
    }
    if (body.startsWith("#")) {
      return String.fromCodePoint(parseInt(body.slice(1), 10));
    }
    return ENTITIES[body] ?? whole;
  });
}

export function encodeEntities(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

export function parseDanmakuXml(xml: string): DanmakuFile {
  const cid = /<(?:chatid|oid)>\s*([^<]+?)\s*<\/(?:chatid|oid)>/.exec(xml);
  if (!/<i[\s>]/.test(xml) || !cid) {
    throw new Error("not a danmaku file: missing <i> root or <chatid>");
  }
  const bullets: DisplayBullet[] = [];
  const re = /<d\s+p="([^"]*)"\s*(?:\/>|>([\s\S]*?)<\/d>)/g;
  let m: RegExpExecArray | null;
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
      content: decodeEntities(m[2] ?? ""),
    });
  }
  return { videoId: cid[1], bullets };
}

export function serializeDanmakuXml(file: DanmakuFile): string {
  const items = file.bullets.map((b) => {
    const p = [
      String(b.appearTime),
      String(b.mode),
      String(b.fontSize),
      String(b.color),
      String(b.sendTimestamp),
      String(b.pool),
      b.userHash,
      b.rowId,
    ].join(",");
    return `<d p="${encodeEntities(p)}">${encodeEntities(b.content)}</d>`;
  });
  return `<?xml version='1.0' encoding='utf-8'?>\n<i><chatid>${encodeEntities(
    file.videoId,
  )}</chatid>${items.join("")}</i>`;
}
