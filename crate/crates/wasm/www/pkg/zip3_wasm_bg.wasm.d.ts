/* tslint:disable */
/* eslint-disable */
export const memory: WebAssembly.Memory;
export const influence_index: (a: number, b: number, c: number) => [number, number];
export const pmf_curve: (a: number, b: number, c: number) => [number, number];
export const simulate_fit_envelope: (a: number, b: number, c: number) => [number, number];
export const __wbindgen_externrefs: WebAssembly.Table;
export const __wbindgen_free: (a: number, b: number, c: number) => void;
export const __wbindgen_start: () => void;
