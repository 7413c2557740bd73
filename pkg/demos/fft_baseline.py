"""Per-channel FFT spectral crests beside the dominant MEMD mode.

Run:  python3 demos/fft_baseline.py
"""

from oscmemd.pipeline import compare_record
from oscmemd.synth import event_scenario, generate


def main():
    record, _ = generate(event_scenario(0))
    cmp = compare_record(record)
    print(f"dominant MEMD mode: {cmp.memd_frequency:.4f} Hz")
    print(f"FFT resolution: {cmp.spectra[0].resolution:.5f} Hz")
    for cid, crest in zip(record.channel_ids, cmp.channel_crests):
        print(f"  {cid}: crest {crest.frequency:.4f} Hz, prominence {crest.prominence:7.1f}")
    print(f"pooled crest: {cmp.pooled_crest.frequency:.4f} Hz")
    for w in cmp.warnings:
        print(f"warning [{w.code}]: {w.message}")


if __name__ == "__main__":
    main()
