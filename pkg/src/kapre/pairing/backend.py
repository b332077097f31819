"""Field, curve and pairing arithmetic for the supersingular backend.

Hot paths work on bare integer tuples: affine points are (x, y) pairs with
None for the identity, target-group values are (a, b) coefficient pairs in
F_p2 = F_p[i]/(i^2 + 1).  The wrapper classes in context.py stay out of the
inner loops.

The pairing is the reduced Tate pairing of order q with the distortion map
phi(x, y) = (-x, iy) applied to the second argument.  With embedding degree
2 the vertical-line factors of Miller's algorithm land in F_p and are
erased by the final exponentiation, so only chord/tangent numerators are
accumulated.  The final exponent (p^2-1)/q splits as (p-1)*(p+1)/q: the
p-1 part is conj(f)/f, the rest is a plain square-and-multiply.
"""

from __future__ import annotations

from .params import SUBGROUP_ORDER, CurveSpec

try:
    from gmpy2 import invert as _invert
    from gmpy2 import mpz
    from gmpy2 import powmod as _powmod
except ImportError:  # pragma: no cover - gmpy2 is a declared dependency
    mpz = int

    def _invert(x, m):
        return pow(x, -1, m)

    def _powmod(b, e, m):
        return pow(b, e, m)


# Miller-loop bits of q below the most significant one, MSB first.
_QBITS = tuple(c == "1" for c in bin(SUBGROUP_ORDER)[3:])

Point = "tuple[int, int] | None"
Fp2 = "tuple[int, int]"

GT_ONE = (1, 0)


class Group:
    """Arithmetic for one parameter set.  Immutable; share freely."""

    def __init__(self, spec: CurveSpec):
        self.spec = spec
        self.p = mpz(spec.modulus)
        self.order = mpz(spec.order)
        self.cofactor = mpz(spec.cofactor)
        self.gen = (mpz(spec.gen[0]), mpz(spec.gen[1]))
        self._sqrt_exp = (self.p + 1) // 4

    # ---- base field helpers ----

    def sqrt(self, a):
        """Square root mod p (p = 3 mod 4), or None if a is a non-residue."""
        r = _powmod(a, self._sqrt_exp, self.p)
        if r * r % self.p != a % self.p:
            return None
        return r

    # ---- curve group (affine, y^2 = x^3 + x) ----

    def on_curve(self, P) -> bool:
        if P is None:
            return True
        x, y = P
        return (y * y - (x * x * x + x)) % self.p == 0

    def neg(self, P):
        if P is None:
            return None
        return (P[0], (-P[1]) % self.p)

    def add(self, P, Q):
        if P is None:
            return Q
        if Q is None:
            return P
        p = self.p
        x1, y1 = P
        x2, y2 = Q
        if x1 == x2:
            if (y1 + y2) % p == 0:
                return None
            lam = (3 * x1 * x1 + 1) * _invert(2 * y1, p) % p
        else:
            lam = (y2 - y1) * _invert(x2 - x1, p) % p
        x3 = (lam * lam - x1 - x2) % p
        return (x3, (lam * (x1 - x3) - y1) % p)

    def mul(self, k: int, P):
        """[k]P by Jacobian double-and-add.  k is used as given (no order
        reduction): cofactor clearing and subgroup checks need the raw value."""
        if P is None or k == 0:
            return None
        if k < 0:
            k, P = -k, self.neg(P)
        p = self.p
        X1, Y1 = mpz(P[0]), mpz(P[1])
        X = Y = Z = None
        for bit in bin(int(k))[2:]:
            if X is not None:
                A = Y * Y % p
                B = 4 * X * A % p
                C = 8 * A * A % p
                ZZ = Z * Z % p
                D = (3 * X * X + ZZ * ZZ) % p
                X2 = (D * D - 2 * B) % p
                Y2 = (D * (B - X2) - C) % p
                Z = 2 * Y * Z % p
                X, Y = X2, Y2
            if bit == "1":
                if X is None:
                    X, Y, Z = X1, Y1, mpz(1)
                elif Z == 0:
                    X, Y, Z = X1, Y1, mpz(1)
                else:
                    ZZ = Z * Z % p
                    U2 = X1 * ZZ % p
                    S2 = Y1 * ZZ * Z % p
                    if U2 == X:
                        if S2 != Y:
                            X = Y = Z = None
                            continue
                        A = Y * Y % p
                        B = 4 * X * A % p
                        C = 8 * A * A % p
                        D = (3 * X * X + ZZ * ZZ) % p
                        X2 = (D * D - 2 * B) % p
                        Y2 = (D * (B - X2) - C) % p
                        Z = 2 * Y * Z % p
                        X, Y = X2, Y2
                        continue
                    H = (U2 - X) % p
                    R = (S2 - Y) % p
                    HH = H * H % p
                    HHH = HH * H % p
                    V = X * HH % p
                    X2 = (R * R - HHH - 2 * V) % p
                    Y2 = (R * (V - X2) - Y * HHH) % p
                    Z = Z * H % p
                    X, Y = X2, Y2
        if X is None or Z == 0:
            return None
        zi = _invert(Z, p)
        zi2 = zi * zi % p
        return (X * zi2 % p, Y * zi2 * zi % p)

    def sum_points(self, points):
        """Sum of affine points using a Jacobian accumulator: one field
        inversion total instead of one per addition.  Used for the long
        products in key aggregation."""
        p = self.p
        X = Y = Z = None
        for P in points:
            if P is None:
                continue
            x1, y1 = mpz(P[0]), mpz(P[1])
            if X is None or Z == 0:
                X, Y, Z = x1, y1, mpz(1)
                continue
            ZZ = Z * Z % p
            U2 = x1 * ZZ % p
            S2 = y1 * ZZ * Z % p
            if U2 == X:
                if S2 != Y:
                    X = Y = Z = None
                    continue
                A = Y * Y % p
                B = 4 * X * A % p
                C = 8 * A * A % p
                D = (3 * X * X + ZZ * ZZ) % p
                X2 = (D * D - 2 * B) % p
                Y2 = (D * (B - X2) - C) % p
                Z = 2 * Y * Z % p
                X, Y = X2, Y2
                continue
            H = (U2 - X) % p
            R = (S2 - Y) % p
            HH = H * H % p
            HHH = HH * H % p
            V = X * HH % p
            X2 = (R * R - HHH - 2 * V) % p
            Y2 = (R * (V - X2) - Y * HHH) % p
            Z = Z * H % p
            X, Y = X2, Y2
        if X is None or Z == 0:
            return None
        zi = _invert(Z, p)
        zi2 = zi * zi % p
        return (X * zi2 % p, Y * zi2 * zi % p)

    def in_subgroup(self, P) -> bool:
        """Order check: on the curve and [q]P = O.  The cofactor is large, so
        membership is far from automatic for arbitrary curve points."""
        if P is None:
            return True
        return self.on_curve(P) and self.mul(int(self.order), P) is None

    # ---- pairing ----

    def pair(self, P, Q):
        """Reduced Tate pairing e(P, phi(Q)) for P, Q in the order-q subgroup.

        Returns an F_p2 pair (a, b).  e is symmetric, bilinear and
        non-degenerate on the subgroup.
        """
        if P is None or Q is None:
            return GT_ONE
        p = self.p
        inv = _invert
        xq, yq = mpz(Q[0]), mpz(Q[1])  # phi(Q) = (-xq, i*yq)
        xp, yp = mpz(P[0]), mpz(P[1])
        xz, yz = xp, yp
        fa, fb = mpz(1), mpz(0)
        for bit in _QBITS:
            # f = f^2 * l_tangent(Z); Z = 2Z
            t = (fa + fb) * (fa - fb) % p
            fb = 2 * fa * fb % p
            fa = t
            lam = (3 * xz * xz + 1) * inv(2 * yz, p) % p
            la = (lam * (xq + xz) - yz) % p  # line value = la + yq*i
            t = (fa * la - fb * yq) % p
            fb = (fa * yq + fb * la) % p
            fa = t
            x3 = (lam * lam - 2 * xz) % p
            yz = (lam * (xz - x3) - yz) % p
            xz = x3
            if bit:
                # f = f * l_chord(Z, P); Z = Z + P
                if xz == xp:
                    # vertical chord: value lies in F_p, killed by the final
                    # exponentiation.  Z + P = O; only reachable on the very
                    # last iteration (P has prime order q).
                    xz = yz = None
                    continue
                lam = (yp - yz) * inv(xp - xz, p) % p
                la = (lam * (xq + xz) - yz) % p
                t = (fa * la - fb * yq) % p
                fb = (fa * yq + fb * la) % p
                fa = t
                x3 = (lam * lam - xz - xp) % p
                yz = (lam * (xz - x3) - yz) % p
                xz = x3
        # final exponentiation: f^(p-1) = conj(f)^2 / norm(f), then ^cofactor
        d = inv(fa * fa + fb * fb, p)
        ca = (fa * fa - fb * fb) * d % p
        cb = -2 * fa * fb * d % p
        return self.gt_pow((ca, cb), int(self.cofactor))

    # ---- target group: order-q subgroup of F_p2^* (norm-1 torus) ----

    def gt_mul(self, A, B):
        a, b = A
        c, d = B
        p = self.p
        return ((a * c - b * d) % p, (a * d + b * c) % p)

    def gt_inv(self, A):
        """Inverse of a norm-1 element is its conjugate."""
        return (A[0], (-A[1]) % self.p)

    def gt_pow(self, A, e: int):
        p = self.p
        ra, rb = mpz(1), mpz(0)
        ba, bb = mpz(A[0]), mpz(A[1])
        e = int(e)
        if e < 0:
            e = -e
            bb = -bb % p
        while e:
            if e & 1:
                t = (ra * ba - rb * bb) % p
                rb = (ra * bb + rb * ba) % p
                ra = t
            t = (ba + bb) * (ba - bb) % p
            bb = 2 * ba * bb % p
            ba = t
            e >>= 1
        return (ra, rb)

    def gt_in_subgroup(self, A) -> bool:
        a, b = A
        p = self.p
        if not (0 <= a < p and 0 <= b < p):
            return False
        if (a * a + b * b) % p != 1:
            return False
        return self.gt_pow(A, int(self.order)) == GT_ONE


_GROUPS: dict[str, Group] = {}


def get_group(spec: CurveSpec) -> Group:
    g = _GROUPS.get(spec.name)
    if g is None:
        g = _GROUPS[spec.name] = Group(spec)
    return g
