/* tslint:disable */
/* eslint-disable */

/**
 * Dilutes `bits` through the harmonic tree schedule at exponent `s`.
 */
export function dilute(s: string, n: number, bits: string): string;

/**
 * Compression ratios of a seeded random stream and of its dilution at exponent `s`.
 */
export function dimension_curve(s: string, n: number, seed: bigint, len: number): string;

/**
 * Breakpoints, slopes and the normalised exponent `E(n)/n` of the separating gauge.
 */
export function gauge_profile(s: string, n: number): string;

export type InitInput = RequestInfo | URL | Response | BufferSource | WebAssembly.Module;

export interface InitOutput {
    readonly memory: WebAssembly.Memory;
    readonly dilute: (a: number, b: number, c: number, d: number, e: number) => [number, number, number, number];
    readonly dimension_curve: (a: number, b: number, c: number, d: bigint, e: number) => [number, number, number, number];
    readonly gauge_profile: (a: number, b: number, c: number) => [number, number, number, number];
    readonly __wbindgen_externrefs: WebAssembly.Table;
    readonly __wbindgen_malloc: (a: number, b: number) => number;
    readonly __wbindgen_realloc: (a: number, b: number, c: number, d: number) => number;
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
