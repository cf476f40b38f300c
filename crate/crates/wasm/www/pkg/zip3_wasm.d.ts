/* tslint:disable */
/* eslint-disable */

/**
 * Likelihood displacement for every case after setting the middle case's
 * response to `outlier_y`.
 */
export function influence_index(n: number, seed: number, outlier_y: number): string;

/**
 * `P(Y = y)` for `y = 0..=y_max`; empty when the parameters are invalid.
 */
export function pmf_curve(mu: number, phi: number, y_max: number): Float64Array;

/**
 * Simulates the reference scenario at size `n`, fits it and builds a
 * residual envelope from `n_sim` replicates.
 */
export function simulate_fit_envelope(n: number, seed: number, n_sim: number): string;

export type InitInput = RequestInfo | URL | Response | BufferSource | WebAssembly.Module;

export interface InitOutput {
    readonly memory: WebAssembly.Memory;
    readonly influence_index: (a: number, b: number, c: number) => [number, number];
    readonly pmf_curve: (a: number, b: number, c: number) => [number, number];
    readonly simulate_fit_envelope: (a: number, b: number, c: number) => [number, number];
    readonly __wbindgen_externrefs: WebAssembly.Table;
    readonly __wbindgen_free: (a: number, b: number, c: number) => void;
    readonly __wbindgen_start: () => void;
}

export type SyncInitInput = BufferSource | WebAssembly.Module;

/**
 * Instantiates the given `module`, which can either be bytes or
 * a precompiled `WebAssembly.Module`.
 *
 * @param {{ module: SyncInitInput }} module - Passing `SyncInitInput` directly is deprecated.
 *
 * @returns {InitOutput}
 */
export function initSync(module: { module: SyncInitInput } | SyncInitInput): InitOutput;

/**
 * If `module_or_path` is {RequestInfo} or {URL}, makes a request and
 * for everything else, calls `WebAssembly.instantiate` directly.
 *
 * @param {{ module_or_path: InitInput | Promise<InitInput> }} module_or_path - Passing `InitInput` directly is deprecated.
 *
 * @returns {Promise<InitOutput>}
 */
export default function __wbg_init (module_or_path?: { module_or_path: InitInput | Promise<InitInput> } | InitInput | Promise<InitInput>): Promise<InitOutput>;
