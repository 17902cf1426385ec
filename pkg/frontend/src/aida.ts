// Sentence <-> URI codec, mirroring the portal's encoding exactly:
// spaces become "+", characters in [A-Za-z0-9._~()-] pass through, everything
// else (including literal "+") is percent-encoded as uppercase-hex UTF-8.

export const AIDA_PREFIX = "http://purl.org/aida/";

const UNRESERVED = /[A-Za-z0-9._~()-]/;

export function encodeSentence(text: string): string {
  const bytes = new TextEncoder().encode(text.normalize("NFC"));
  let out = "";
  for (const byte of bytes) {
    const ch = String.fromCharCode(byte);
    if (ch === " ") {
      out += "+";
    } else if (byte < 0x80 && UNRESERVED.test(ch)) {
      out += ch;
    } else {
      out += "%" + byte.toString(16).toUpperCase().padStart(2, "0");
    }
  }
  return AIDA_PREFIX + out;
}

export function decodeSentenceUri(uri: string): string {
  if (!uri.startsWith(AIDA_PREFIX)) {
    throw new Error(`not a sentence URI: ${uri}`);
  }
  const body = uri.slice(AIDA_PREFIX.length);
  const bytes: number[] = [];
  for (let i = 0; i < body.length; i++) {
    const ch = body[i];
    if (ch === "+") {
      bytes.push(0x20);
    } else if (ch === "%") {
      const hex = body.slice(i + 1, i + 3);
      if (!/^[0-9A-Fa-f]{2}$/.test(hex)) {
        throw new Error(`bad percent escape at offset ${i}`);
      }
      bytes.push(parseInt(hex, 16));
      i += 2;
    } else {
      bytes.push(body.charCodeAt(i));
    }
  }
  return new TextDecoder("utf-8", { fatal: true }).decode(new Uint8Array(bytes));
}

export function isSentenceUri(uri: string): boolean {
  try {
    decodeSentenceUri(uri);
    return true;
  } catch {
    return false;
  }
}
