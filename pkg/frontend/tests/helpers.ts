import * as crypto from "node:crypto";
import * as fs from "node:fs";
import * as os from "node:os";
import * as path from "node:path";

export function fixture(name: string): string {
  return path.join(__dirname, "fixtures", name);
}

export function sha256(filePath: string): string {
  return crypto.createHash("sha256").update(fs.readFileSync(filePath)).digest("hex");
}

/** Write a throwaway CSV and return its path. */
export function tempCsv(lines: string[]): string {
  const dir = fs.mkdtempSync(path.join(os.tmpdir(), "plots-test-"));
  const file = path.join(dir, "data.csv");
  fs.writeFileSync(file, `${lines.join("\n")}\n`);
  return file;
}

export function tempDir(): string {
  return fs.mkdtempSync(path.join(os.tmpdir(), "plots-out-"));
}
