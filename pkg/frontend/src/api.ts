/** Thin typed client for the classification service JSON API. */

export interface Prediction {
  index: number;
  label: string;
  probability: number;
}

export interface ClassifyResponse {
  capture_id: string;
  grid: { h: number; w: number };
  predictions: Prediction[];
  cams: number[][][];
}

export interface CaptureSummary {
  id: string;
  created_at: string;
  tag: string;
  note: string;
  top_label: string;
  top_probability: number;
}

export interface CompareResponse {
  a: string;
  b: string;
  class_index: number;
  label: string;
  confidence_delta: number;
  grid: { h: number; w: number };
  cam_diff: number[][];
  class_deltas: {
    index: number;
    label: string;
    probability_a: number;
    probability_b: number;
    delta: number;
  }[];
  rank_changes: { index: number; label: string; rank_a: number | null; rank_b: number | null }[];
}

async function checked<T>(resp: Response): Promise<T> {
  if (!resp.ok) throw new Error(`API error ${resp.status}: ${await resp.text()}`);
  return (await resp.json()) as T;
}

export async function classify(pngBlob: Blob): Promise<ClassifyResponse> {
  return checked(
    await fetch("/api/classify", {
      method: "POST",
      headers: { "content-type": "image/png" },
      body: pngBlob,
    }),
  );
}

export async function tagCapture(id: string, tag: string, note: string): Promise<void> {
  await checked(
    await fetch(`/api/captures/${id}/tag`, {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify({ tag, note }),
    }),
  );
}

export async function listCaptures(tag?: string): Promise<CaptureSummary[]> {
  const qs = tag ? `?tag=${encodeURIComponent(tag)}` : "";
  return checked(await fetch(`/api/captures${qs}`));
}

export async function compareCaptures(
  a: string,
  b: string,
  classIndex: number,
): Promise<CompareResponse> {
  return checked(await fetch(`/api/compare?a=${a}&b=${b}&class=${classIndex}`));
}

export function captureImageUrl(id: string): string {
  return `/api/captures/${id}/image`;
}
