/* tslint:disable */
/* eslint-disable */

export class Demo {
    free(): void;
    [Symbol.dispose](): void;
    /**
     * Per cell of step `t`: the degree of its δ-sublevel component, or
     * [`OUTSIDE`]. Row-major over `(width - 1) x (height - 1)` cells.
     */
    components(t: number, delta: number): Int32Array;
    /**
     * Critical points of the simplified step: `[i, j, kind, ...]` with kind
     * 0 = minimum, 1 = saddle, 2 = maximum.
     */
    criticals(t: number): Float64Array;
    /**
     * World size of the domain, `[x extent, y extent]`.
     */
    extent(): Float64Array;
    height(): number;
    /**
     * The rotating-Gaussians preset resampled at `width x height x steps`.
     */
    constructor(width: number, height: number, steps: number, noise: number, seed: number);
    steps(): number;
    /**
     * A δ suggested by the robustness of the criticals of the first steps, or
     * `NaN` when there is no clear gap.
     */
    suggest_delta(): number;
    /**
     * Tracks for the whole run: `[id, n, x0, y0, t0, ..., x(n-1), y(n-1), t(n-1), id, n, ...]`.
     */
    tracks(delta: number, eps_t: number, eps_s: number, min_length: number): Float64Array;
    /**
     * Raw values of step `t`, row-major.
     */
    values(t: number): Float64Array;
    width(): number;
}

export type InitInput = RequestInfo | URL | Response | BufferSource | WebAssembly.Module;

export interface InitOutput {
    readonly memory: WebAssembly.Memory;
    readonly __wbg_demo_free: (a: number, b: number) => void;
    readonly demo_components: (a: number, b: number, c: number) => [number, number, number, number];
    readonly demo_criticals: (a: number, b: number) => [number, number, number, number];
    readonly demo_extent: (a: number) => [number, number];
    readonly demo_height: (a: number) => number;
    readonly demo_new: (a: number, b: number, c: number, d: number, e: number) => [number, number, number];
    readonly demo_steps: (a: number) => number;
    readonly demo_suggest_delta: (a: number) => [number, number, number];
    readonly demo_tracks: (a: number, b: number, c: number, d: number, e: number) => [number, number, number, number];
    readonly demo_values: (a: number, b: number) => [number, number, number, number];
    readonly demo_width: (a: number) => number;
    readonly __externref_table_alloc: () => number;
    readonly __wbindgen_externrefs: WebAssembly.Table;
    readonly __externref_table_dealloc: (a: number) => void;
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
