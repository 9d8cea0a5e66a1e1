// Promote support: invert a recommended chart's encoding back into the
// channel mapping that regenerates it. The service's emitter is lossless
// over (field, aggregate, timeUnit, bin), and pinning the candidate's mark
// makes the rebuilt main chart byte-identical to the card.

import { CHANNELS, type FieldRefJson, type MappingJson, type VegaLiteSpec } from "./types.js";

export function specToMapping(spec: VegaLiteSpec): MappingJson {
  const mapping: MappingJson = {};
  let stacked = false;
  for (const channel of CHANNELS) {
    const entry = spec.encoding[channel];
    if (!entry) {
      continue;
    }
    const ref: FieldRefJson = {};
    if (entry.field !== undefined) {
      ref.field = entry.field;
    }
    if (entry.aggregate) {
      ref.aggregate = entry.aggregate;
    }
    if (entry.timeUnit) {
      ref.timeUnit = entry.timeUnit;
    }
    if (entry.bin) {
      ref.bin = true;
    }
    if (entry.stack) {
      stacked = true;
    }
    mapping[channel] = ref;
  }
  mapping.mark = spec.mark;
  if (stacked) {
    mapping.stacked = true;
  }
  return mapping;
}
