"""Reference values frozen from mpmath at 30 significant digits.

Regenerate with tests/make_oracle_values.py; the library never imports mpmath.
"""

LOG_GAMMA = [
    (0.25, 1.2880225246980774),
    (0.5, 0.5723649429247001),
    (1.0, 0.0),
    (3.7, 1.428072326665388),
    (12.5, 18.734347511936445),
    (150.25, 601.2615040324997),
]

# (order, argument, J)
BESSEL_J = [
    (0.0, 0.5, 0.9384698072408129),
    (0.5, 3.0, 0.06500818287737578),
    (2.25, 7.9, -0.21323424447952724),
    (1.5, 8.1, 0.10184586201251443),
    (0.0, 30.0, -0.08636798358104021),
    (7.3, 40.0, -0.1260122407020463),
    (3.5, 120.0, 0.05712625067703017),
    (60.0, 50.0, 0.0010485195995314181),
    (25.75, 100.0, 0.060338132653234094),
    (0.5, 450.0, -0.025700104018183442),
    (4.0, 1000.0, 0.024748265003654773),
    (10.0, 5.0, 0.0014678026473104741),
]

# (m, nu, phi, nu^{-1} C_m^nu(cos phi))
GEGENBAUER = [
    (1, 0.5, 0.3, 1.910672978251212),
    (5, 1.0, 1.1, 0.3495722516159456),
    (12, 0.25, 2.0, 0.151324339744444),
    (30, 2.0, 0.7, 17.40322845794636),
    (100, 0.5, 1.5, 0.10733286782827516),
    (7, 3.5, 3.0, -432.8279375469697),
]

# (b, nu, y, phi, S) from the J-Bessel form summed term by term
SCRIPT_I = [
    (1.5, 0.5, 40.0, 1.0, complex(0.20546512240832185, 0.09022271418923274)),
    (0.5, 1.0, 3.0, 0.4, complex(-7.751717051078428, -2.1871936221489863)),
    (2.5, 0.25, 17.0, 2.5, complex(-0.050500026719631025, -0.282361169025719)),
    (3.0, 1.0, 60.0, 3.14159, complex(-0.021683007828922036, 0.003747030303232732)),
    (1.25, 2.0, 9.0, 0.0, complex(-0.09533018562346957, -0.23805336110767042)),
    (1.0, 0.0, 25.0, 1.3, complex(0.9193837249586654, -0.3933618770052976)),
]

# (lam, y, (y/2)^-lam J_lam(y))
I_TILDE = [
    (0.5, 0.0, 1.1283791670955126),
    (0.0, 3.0, -0.26005195490193345),
    (1.5, 10.0, 0.017708092486281465),
    (-0.5, 25.0, 0.5592263016366182),
    (2.75, 90.0, -2.375891438622375e-06),
    (0.25, 600.0, -0.002671627144010106),
]

# (m, nu, F_{nu,1}(m))
F_NU1 = [
    (1, 0.5, 0.6366197723675814),
    (10, 1.0, 5.5),
    (200, 2.0, 515137.875),
    (50, 0.25, 0.06070746788673414),
]
