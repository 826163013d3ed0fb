/**
 * View state and its pure transitions. Result toggling and threshold /
 * alpha changes only touch cached data; nothing here performs network IO,
 * which is what keeps overlay swaps instant.
 */

import type { ClassifyResponse } from "./api.js";

export type Mode = "camera" | "result" | "gallery" | "compare";

export interface ViewState {
  mode: Mode;
  activeResult: number; // 0..2, indexes the cached top-3
  threshold: number;
  alpha: number;
  captureId: string | null;
  response: ClassifyResponse | null;
}

export const DEFAULT_THRESHOLD = 0.6;
export const DEFAULT_ALPHA = 0.45;

export function initialState(): ViewState {
  return {
    mode: "camera",
    activeResult: 0,
    threshold: DEFAULT_THRESHOLD,
    alpha: DEFAULT_ALPHA,
    captureId: null,
    response: null,
  };
}

export function withResult(state: ViewState, response: ClassifyResponse): ViewState {
  return { ...state, mode: "result", activeResult: 0, captureId: response.capture_id, response };
}

export function toggleResult(state: ViewState, index: number): ViewState {
  if (!state.response || index < 0 || index >= state.response.predictions.length) {
    return state;
  }
  return { ...state, activeResult: index };
}

export function setThreshold(state: ViewState, t: number): ViewState {
  return { ...state, threshold: Math.min(1, Math.max(0, t)) };
}

export function setAlpha(state: ViewState, a: number): ViewState {
  return { ...state, alpha: Math.min(1, Math.max(0, a)) };
}

export function activeGrid(state: ViewState): number[][] | null {
  if (!state.response) return null;
  return state.response.cams[state.activeResult] ?? null;
}
