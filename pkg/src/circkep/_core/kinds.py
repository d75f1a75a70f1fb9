"""Shared constants for the integration kernels.

Kernel ids, state layouts, status codes and boundary-clamp masks are defined
once here so the compiled and pure-Python backends cannot drift apart.
"""

# State layouts (the trailing theta/t pair is co-integrated, never fed back):
KIND_CARTESIAN = 0       # (ux, uy, vx, vy), clock = physical time
KIND_REDUCED = 1         # (r, p, l, theta, t), clock = physical time
KIND_GAMMA_POS_A0 = 2    # (y, v1, mu1, theta, t), clock = chart time
KIND_GAMMA_POS_APOS = 3  # (q1, v11, mu11, theta, t), clock = chart time
KIND_GAMMA_NEG = 4       # (r1, v, x, theta, t), clock = chart time
KIND_CRITICAL = 5        # (r1, v, rho1, theta, t), clock = chart time
KIND_CRITICAL_L2 = 6     # (v1, mu1, rho2, theta, t), clock = chart time

ALL_KINDS = (
    KIND_CARTESIAN,
    KIND_REDUCED,
    KIND_GAMMA_POS_A0,
    KIND_GAMMA_POS_APOS,
    KIND_GAMMA_NEG,
    KIND_CRITICAL,
    KIND_CRITICAL_L2,
)

DIM = {
    KIND_CARTESIAN: 4,
    KIND_REDUCED: 5,
    KIND_GAMMA_POS_A0: 5,
    KIND_GAMMA_POS_APOS: 5,
    KIND_GAMMA_NEG: 5,
    KIND_CRITICAL: 5,
    KIND_CRITICAL_L2: 5,
}

# Components clamped to the invariant boundary >= 0 (radial-like and
# momentum-like coordinates).  Components not listed may take any sign.
NONNEG = {
    KIND_CARTESIAN: (),
    KIND_REDUCED: (2,),            # l
    KIND_GAMMA_POS_A0: (0, 2),     # y, mu1
    KIND_GAMMA_POS_APOS: (0, 2),   # q1, mu11
    KIND_GAMMA_NEG: (2,),          # x
    KIND_CRITICAL: (2,),           # rho1
    KIND_CRITICAL_L2: (1, 2),      # mu1, rho2
}

# Parameter vector layout passed to the kernels.
P_ALPHA = 0
P_BETA = 1
P_DELTA = 2
P_GAMMA = 3
P_GAMMA_TILDE = 4
N_PARAMS = 5

STATUS_STOP_TIME = 0
STATUS_TERMINAL_EVENT = 1
STATUS_MAX_STEPS = 2
STATUS_NON_FINITE = 3
STATUS_STEP_UNDERFLOW = 4

MAX_DIM = 8
MAX_EVENTS = 8
