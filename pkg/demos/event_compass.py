"""Ambient versus post-event mode estimates and mode compass on a 12-channel record.

Run:  python3 demos/event_compass.py
"""

import numpy as np

from oscmemd import memd_decompose, mode_compass, rank_modes
from oscmemd.synth import EVENT_TIME, event_scenario, generate


def main():
    record, _ = generate(event_scenario(0))
    segments = {"ambient": (0.0, EVENT_TIME), "event": (EVENT_TIME, record.time[-1] + 1.0)}
    phases = {}
    for name, (start, stop) in segments.items():
        seg = record.segment(start, stop)
        imf_set = memd_decompose(seg)
        top = rank_modes(imf_set)[0]
        compass = mode_compass(top, imf_set)
        phases[name] = np.degrees([e.phase for e in compass])
        print(f"{name:8s} IMF {top.imf_index}: {top.median_joint_frequency:.4f} Hz, {top.classification.value}")
    print("\nchannel  ambient_deg  event_deg")
    for cid, a, b in zip(record.channel_ids, phases["ambient"], phases["event"]):
        print(f"{cid:7s}  {a:11.1f}  {b:9.1f}")


if __name__ == "__main__":
    main()
