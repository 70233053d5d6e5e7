#!/usr/bin/env python3
"""Regenerate the bundled drive-cycle CSVs.

The profiles are deterministic approximations of the EPA US06 and New York
City Cycle dynamometer schedules: a hand-placed waypoint envelope matching
the published duration, top speed and speed envelope of each schedule, plus
seeded second-by-second speed texture matching the strong 1 Hz acceleration
content of the measured schedules (US06 reaches ~8 mph/s transients; both
cycles fluctuate continuously while moving). See data/README.md for
provenance notes and how to substitute the official EPA tables.
"""

import os
import random

US06_WAYPOINTS = [
    (0, 0.0), (4, 0.0), (10, 18.0), (16, 29.0), (24, 25.0), (34, 43.0),
    (46, 49.0), (56, 38.0), (66, 51.0), (78, 56.0), (88, 46.0), (98, 57.0),
    (108, 40.0), (118, 18.0), (126, 0.0), (138, 0.0), (143, 24.0),
    (152, 38.0), (163, 56.0), (176, 69.0), (190, 78.0), (204, 80.3),
    (218, 74.0), (232, 79.0), (246, 71.0), (260, 76.0), (274, 67.0),
    (288, 74.0), (302, 65.0), (316, 72.0), (330, 63.0), (344, 70.0),
    (358, 61.0), (372, 68.0), (386, 59.0), (400, 66.0), (414, 57.0),
    (428, 64.0), (442, 55.0), (456, 62.0), (468, 51.0), (480, 59.0),
    (492, 47.0), (504, 56.0), (516, 42.0), (528, 50.0), (540, 36.0),
    (552, 42.0), (564, 26.0), (576, 30.0), (584, 16.0), (592, 4.0),
    (595, 0.0),
]

NYCC_WAYPOINTS = [
    (0, 0.0), (12, 0.0), (20, 13.0), (28, 7.0), (36, 15.0), (46, 0.0),
    (64, 0.0), (72, 17.0), (82, 25.0), (90, 12.0), (98, 0.0), (120, 0.0),
    (130, 18.0), (140, 27.7), (152, 21.0), (162, 9.0), (170, 0.0),
    (192, 0.0), (201, 15.0), (211, 23.0), (221, 11.0), (229, 0.0),
    (252, 0.0), (260, 12.0), (270, 20.0), (280, 26.0), (292, 15.0),
    (302, 0.0), (326, 0.0), (335, 17.0), (345, 25.0), (355, 13.0),
    (363, 0.0), (388, 0.0), (396, 11.0), (406, 19.0), (416, 9.0),
    (424, 0.0), (450, 0.0), (458, 15.0), (468, 23.0), (478, 11.0),
    (486, 0.0), (510, 0.0), (518, 13.0), (528, 19.0), (538, 9.0),
    (546, 0.0), (566, 0.0), (573, 10.0), (581, 16.0), (589, 7.0),
    (595, 0.0), (597, 0.0),
]


def interpolate(waypoints):
    end = waypoints[-1][0]
    speeds = []
    seg = 0
    for t in range(end + 1):
        while waypoints[seg + 1][0] < t:
            seg += 1
        (t0, v0), (t1, v1) = waypoints[seg], waypoints[seg + 1]
        v = v0 if t1 == t0 else v0 + (v1 - v0) * (t - t0) / (t1 - t0)
        speeds.append(max(0.0, v))
    return speeds


def texture(speeds, amp_mph, ar, max_accel_mph_s, seed):
    """Add seeded 1 Hz speed fluctuation on top of the envelope.

    Idle sections stay exactly at rest; moving sections pick up the jitter a
    measured schedule shows from real traffic and driver inputs. A negative
    `ar` gives the brake/throttle alternation visible in the measured
    schedules. The result is clamped so sample-to-sample steps never exceed
    the schedule's published acceleration extremes.
    """
    rng = random.Random(seed)
    noise = 0.0
    out = [0.0] * len(speeds)
    for t, v in enumerate(speeds):
        noise = ar * noise + rng.uniform(-1.0, 1.0) * amp_mph
        if v <= 0.05:
            out[t] = 0.0
            noise = 0.0
            continue
        ramp = min(1.0, v / 6.0)  # fade jitter in near stops
        out[t] = max(0.0, v + ramp * noise)
    for t in range(1, len(out)):
        step = out[t] - out[t - 1]
        if abs(step) > max_accel_mph_s:
            out[t] = out[t - 1] + (max_accel_mph_s if step > 0 else
                                   -max_accel_mph_s)
            out[t] = max(0.0, out[t])
    return out


def write_cycle(path, speeds):
    with open(path, "w", newline="\n") as f:
        f.write("time_s,speed_mph\n")
        for t, v in enumerate(speeds):
            f.write(f"{t},{v:.4f}\n")


def rescale_peak(speeds, v_peak):
    out = [min(v, v_peak) for v in speeds]
    if max(out) < v_peak:
        out[out.index(max(out))] = v_peak
    return out


def stats(name, speeds):
    avg = sum(speeds) / len(speeds)
    dist = sum(speeds) / 3600.0
    acc = [speeds[t] - speeds[t - 1] for t in range(1, len(speeds))]
    moving = [a for t, a in enumerate(acc, start=1) if speeds[t] > 0.1]
    rms = (sum(a * a for a in moving) / max(1, len(moving))) ** 0.5
    print(f"{name}: {len(speeds)} samples, max {max(speeds):.1f} mph, "
          f"avg {avg:.1f} mph, {dist:.2f} mi, accel rms {rms:.2f} mph/s, "
          f"peak accel {max(acc):.2f} / {min(acc):.2f} mph/s")


def main():
    here = os.path.dirname(os.path.abspath(__file__))
    # acceleration extremes from the published schedules:
    # US06 about +8.5/-6.9 mph/s, NYCC about +6/-6 mph/s
    us06 = rescale_peak(
        texture(interpolate(US06_WAYPOINTS), 3.6, -0.25, 8.4, seed=20060),
        80.3)
    nycc = rescale_peak(
        texture(interpolate(NYCC_WAYPOINTS), 2.4, -0.2, 6.0, seed=19750),
        27.7)
    write_cycle(os.path.join(here, "us06.csv"), us06)
    write_cycle(os.path.join(here, "nycc.csv"), nycc)
    stats("us06", us06)
    stats("nycc", nycc)


if __name__ == "__main__":
    main()
