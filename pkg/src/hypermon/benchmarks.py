"""Built-in example programs and reference trace sets.

The toll-road programs compute trip fees from the hours at which a vehicle
passes consecutive toll stations and from its passenger count.  Hours are
clock hours in [0, 23]; passenger counts range over [1, 8].  Those ranges
are harness configuration, declared here via `domain` annotations.

TOLL_RAW_TRACES / TOLL_DDMIN_TRACES / TOLL_MDMIN_TRACES are small
reference trace sets for the three-station fee method: raw inputs, the
same traces after distributed minimization, and after monolithic
minimization, respectively.
"""

TOLL_SOURCE = """\
class Toll {
  //@ domain hour in [0, 23], passengers in [1, 8];
  int rate(int hour, int passengers) {
    int r;                                     // standard rates:
    if (hour >= 9 && hour <= 17) { r = 90; }   //  - daytime
    else                         { r = 70; }   //  - nighttime
    if (passengers > 2) { r = r - (r / 5); }   // carpool: 20%
    return r;
  }
  int max(int x, int y) {
    if (x > y) { return x; } else { return y; }
  }
  //@ domain t1 in [0, 23], t2 in [0, 23], t3 in [0, 23], p in [1, 8];
  int fee(int t1, int t2, int t3, int p) {
    int r1 = rate(t1, p);           // rates at each toll station
    int r2 = rate(t2, p);
    int r3 = rate(t3, p);
    int f1 = max(r1, r2) * 4;       // fees per road section
    int f2 = max(r2, r3) * 7;
    return f1 + f2;                 // total fee
  }
}
"""

# Two-station variant: a single road section, fee returned directly.
TOLL2_SOURCE = """\
class Toll2 {
  //@ domain hour in [0, 23], passengers in [1, 8];
  int rate(int hour, int passengers) {
    int r;
    if (hour >= 9 && hour <= 17) { r = 90; }
    else                         { r = 70; }
    if (passengers > 2) { r = r - (r / 5); }
    return r;
  }
  int max(int x, int y) {
    if (x > y) { return x; } else { return y; }
  }
  //@ domain t1 in [0, 23], t2 in [0, 23], p in [1, 8];
  int fee(int t1, int t2, int p) {
    int r1 = rate(t1, p);
    int r2 = rate(t2, p);
    int f1 = max(r1, r2) * 4;
    return f1;
  }
}
"""

DIV_SOURCE = """\
class Div {
  //@ requires x >= 0 && y > 0;
  //@ ensures (\\result * y <= x) && (\\result * y < x + y);
  int posDiv(int x, int y) {
    int q = 0;
    //@ maintaining (r >= 0) && (r + q * y == x);
    //@ decreasing r;
    for (int r = x; r >= y; ++q) { r -= y; }
    return q;
  }
}
"""

# Reference traces for Toll.fee: columns t1, t2, t3, p, fee.
TOLL_RAW_TRACES = (
    "20, 22, 1,  1, 770",
    "2 , 2,  3,  5, 616",
    "9 , 10, 10, 4, 792",
    "23, 0,  2,  5, 616",
    "10, 11, 14, 1, 990",
    "8,  10, 11, 1, 990",
)

TOLL_DDMIN_TRACES = (
    "0, 0, 0, 1, 770",
    "0, 0, 0, 3, 616",
    "9, 9, 9, 3, 792",
    "0, 0, 0, 3, 616",
    "9, 9, 9, 1, 990",
    "0, 9, 9, 1, 990",
)

TOLL_MDMIN_TRACES = (
    "20, 22, 1,  1, 770",
    "2,  2,  3,  5, 616",
    "9,  10, 10, 4, 792",
    "2,  2,  3,  5, 616",
    "14, 15, 15, 2, 990",
    "14, 15, 15, 2, 990",
)


def load_toll():
    """Parsed three-station toll program (methods rate, max, fee)."""
    from .minilang import parse_program

    return parse_program(TOLL_SOURCE)


def load_toll2():
    """Parsed two-station toll program variant."""
    from .minilang import parse_program

    return parse_program(TOLL2_SOURCE)


def load_div():
    """Parsed division example with requires/ensures and loop annotations."""
    from .minilang import parse_program

    return parse_program(DIV_SOURCE)
