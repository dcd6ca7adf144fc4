/* tslint:disable */
/* eslint-disable */
export const memory: WebAssembly.Memory;
export const __wbg_demo_free: (a: number, b: number) => void;
export const demo_components: (a: number, b: number, c: number) => [number, number, number, number];
export const demo_criticals: (a: number, b: number) => [number, number, number, number];
export const demo_extent: (a: number) => [number, number];
export const demo_height: (a: number) => number;
export const demo_new: (a: number, b: number, c: number, d: number, e: number) => [number, number, number];
export const demo_steps: (a: number) => number;
export const demo_suggest_delta: (a: number) => [number, number, number];
export const demo_tracks: (a: number, b: number, c: number, d: number, e: number) => [number, number, number, number];
export const demo_values: (a: number, b: number) => [number, number, number, number];
export const demo_width: (a: number) => number;
export const __externref_table_alloc: () => number;
export const __wbindgen_externrefs: WebAssembly.Table;
export const __externref_table_dealloc: (a: number) => void;
export const __wbindgen_free: (a: number, b: number, c: number) => void;
export const __wbindgen_start: () => void;
