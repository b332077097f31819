"""Curve parameter sets for the symmetric-pairing backend.

All sets share the curve shape y^2 = x^3 + x over F_p with p = 3 (mod 4),
which is supersingular: the group has exactly p + 1 points, the embedding
degree is 2, and the distortion map (x, y) -> (-x, iy) turns the Tate
pairing into a symmetric pairing on a single prime-order subgroup.

The subgroup order q = 2^254 + 79 is shared by every set (its low popcount
keeps Miller-loop addition steps rare).  Field primes have the form
p = 4*m*q - 1 with m the smallest integer giving a prime of the target
size, so the constants are reproducible by search; test_pairing re-verifies
primality, p = 3 (mod 4), q | p + 1, generator order and non-degeneracy.
"""

from __future__ import annotations

from dataclasses import dataclass

# Prime order of the pairing groups (the scheme's group order).
SUBGROUP_ORDER = (1 << 254) + 79

_M512 = 57896044618658097711785492504343953926634992332820282019728792003956564819987
_M1024 = 776259046150354467574489744231251277628443008558348305569526019013025476341070009512508274072590543025527341660423796803432191868377084487614104920774751414698972071905162263339621379085632490172124488193932714578256993620593689139
_M1536 = 10407932194664399081925240327364085538615262247266704805319112350403608059644956746481414850390201162827955023163116971524095122399121512085218143828485682711268579888162947902336161184220769205025473065475962575012388455072025454085156200439102114882433656417157556611268354429807486841784991085049693243840370505949851700522930287230543240845594048904549736871477164765453079175816326


@dataclass(frozen=True)
class CurveSpec:
    """Constants for one named parameter set."""

    name: str
    modulus: int          # field prime p
    order: int            # prime subgroup order q
    cofactor: int         # (p + 1) / q
    gen: tuple[int, int]  # affine base generator of the order-q subgroup

    @property
    def fe_bytes(self) -> int:
        """Byte length of one field element."""
        return (self.modulus.bit_length() + 7) // 8

    @property
    def scalar_bytes(self) -> int:
        return (self.order.bit_length() + 7) // 8


def _spec(name: str, m: int, gx: int, gy: int) -> CurveSpec:
    p = 4 * m * SUBGROUP_ORDER - 1
    return CurveSpec(name, p, SUBGROUP_ORDER, (p + 1) // SUBGROUP_ORDER, (gx, gy))


# Generators: G = [cofactor]*P0 where P0 is the curve point with the smallest
# x >= 2 whose cofactor multiple is not the identity (even-y square root).
CURVES: dict[str, CurveSpec] = {
    "ss512": _spec(
        "ss512",
        _M512,
        0x5DAB13CEC4434BD9E6A96217115F4D80224A89EC19A936A40A3151B19B09894A6B12DEC788725531741821F222EDDBD46CD60E282B28B8C411C32D83D9D57186,
        0x468E6FE17AFB1EC3C31FFA386B66403DDF434B3BF190E430C156B34EE98BC7CFF65D2B150C59863018BA743819E19506D81403737ACE6BFE1B893066C0BF424F,
    ),
    "ss1024": _spec(
        "ss1024",
        _M1024,
        0x50333896DF2B0A3505C351B3038D4E8CABEF5880E6B0466BD6A523C97ADD41F1ABB3B6C57B70643E986D752FD95A3877E59D6CB9369F882C28269C5D7840C1D8F068EDB65447E53F220A157DC6BCC80F28B55E5F1D62114E984DE645D007865536A9AD265F11550F229CB8FEC1CA070998D87F73A0E56A49DC17B491C4E75CBE,
        0x4E9DFD790C32A038D94294D4D51B091DDC9E79220DF9C118AFC8941C9D26841ECE7B1C72640F9F5459172FAD4386EFC8EA8E80C45495C4799D51BD0AA46FE3475CD4558E4D1976BF30D638278D64112F3C686FFC7890ACB102D9BB83DBDE15AB8E19ACCEBC92C524E0B3B476DBFF8EFA7E36A0E04885B6AA2990A7A91C964B46,
    ),
    "ss1536": _spec(
        "ss1536",
        _M1536,
        0x5FC57553FEAB321A146E9E54357D187C99F67A895F69DCC28F0DB12DFDF237E9C5A69D842A2C1971008E505F4651A099178A85ECD370327163CA66F694AC5102099093B3579060A36D1DB7DE08E3D96BA457269FE659FFAEDCC43D9707E6C0919AD2341FDD5A128CB6A8242723708FB4B45025647216C31DBEA83321691C68EEEE6D89985425946A7410FAB7CA96659D89A8BA2FD01424A3215E89DD57E961E42546A8598BD8F070FAD9B425D40998B31EAF15BBA1EC6EB2AD14573AF648181F,
        0x71C7B6FF00EE0B03E9684FB10C0B94230E771BF2CFE03C213D593786AC203EDC3CF6985D2F4F47948850C873E0F45BD29EC9DB7A6AE6E855F87BC558D94CF94AB93DDCC0DE7954E54C65EA2E82A4284A57EDFAC8FAF8CC8DB689CD251BC7C94EEB3C11C765C3FCE85A3A6BAA3B28FF70AA719A48F93F2670F6918DC7A321AF9EEBB197AB37D2329EE7406A153AF721F1E915A3E98479644D37F4693040000683421F8676ABEBBEE8AB1043BDC105B06E4DC215BA5AA61DB63A7DE7D274DAD519,
    ),
}

DEFAULT_CURVE = "ss1024"
