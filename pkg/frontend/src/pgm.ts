// Binary PGM (P5) parsing for the occupancy maps the service serves.
// The writer always emits maxval 255 and one byte per pixel, top row first.

export type Graymap = {
  width: number;
  height: number;
  pixels: Uint8Array; // row-major, top row first
};

export function parsePgm(bytes: Uint8Array): Graymap {
  const decoder = new TextDecoder("ascii");
  // header is three whitespace-separated fields after the magic: w, h, maxval
  const headText = decoder.decode(bytes.subarray(0, Math.min(bytes.length, 64)));
  const match = /^P5\s+(\d+)\s+(\d+)\s+(\d+)\s/.exec(headText);
  if (!match) {
    throw new Error("not a binary PGM (P5) file");
  }
  const width = parseInt(match[1], 10);
  const height = parseInt(match[2], 10);
  const maxval = parseInt(match[3], 10);
  if (maxval !== 255) {
    throw new Error(`unsupported PGM maxval ${maxval}`);
  }
  const offset = match[0].length;
  const expected = width * height;
  const pixels = bytes.subarray(offset, offset + expected);
  if (pixels.length !== expected) {
    throw new Error(
      `PGM payload truncated: expected ${expected} bytes, got ${pixels.length}`,
    );
  }
  return { width, height, pixels: new Uint8Array(pixels) };
}

export function pixelAt(map: Graymap, col: number, rowFromTop: number): number {
  return map.pixels[rowFromTop * map.width + col];
}
