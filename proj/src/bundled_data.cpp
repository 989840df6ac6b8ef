// Default traffic inputs. Must stay identical to data/demand_grid.txt and
// data/continent_ratios.txt (checked by the unit tests).

#include "leosim/traffic.hpp"

namespace leosim {

const char* DemandGrid::bundled_text() {
  return R"grid(# Background demand grid: 12 latitude bands (row 1 = 90N..75N) x 24 longitude
# bands (column 1 = 180W..165W), 15 degrees each. Relative weights; normalized at
# load. Synthetic values shaped after the usual hotspot picture (North America,
# Europe, East/South Asia heavy; oceans light).
[weights]
0 0 0 0 0 0 0 0 0 0 0 0 0 0 0 0 0 0 0 0 0 0 0 0
0.05 0.2 0.05 0.05 0.05 0.05 0.05 0.05 0.05 0.05 0.05 0.05 1 1 0.05 0.05 0.05 0.05 0.05 0.05 0.05 0.05 0.05 0.05
0.05 0.05 0.05 1.5 1 1 2 1 0.05 0.05 0.05 5 8 4 4 0.05 0.05 0.5 0.5 0.5 0.5 0.05 0.05 0.05
0.05 0.05 0.05 3 3 4 6 5 0.05 0.05 0.05 3 5 3 2 1.5 1 1 1 7 7 6 0.05 0.05
0.05 0.05 0.05 0.05 1.5 2 2 0.05 0.05 0.05 0.05 0.5 0.3 0.3 2 2 3 5 3 8 0.05 0.05 0.05 0.05
0.05 0.05 0.05 0.05 0.05 0.05 1.5 2 0.05 0.05 0.05 1.5 3 0.05 1.5 0.05 0.05 2 3 2 1.5 0.05 0.05 0.05
0.05 0.05 0.05 0.05 0.05 0.05 0.05 1 1 1.5 0.05 0.05 0.05 1 1.5 0.05 0.05 0.05 2 3 0.05 0.5 0.05 0.05
0.05 0.05 0.05 0.05 0.05 0.05 0.05 1 4 3 0.05 0.05 0.05 2 0.05 0.05 0.05 0.05 0.05 0.05 0.3 1 1.5 0.05
0.05 0.05 0.05 0.05 0.05 0.05 0.05 2 3 0.05 0.05 0.05 0.05 1 0.05 0.05 0.05 0.05 0.05 1 0.05 2 1.5 1
0.05 0.05 0.05 0.05 0.05 0.05 0.05 0.05 0.05 0.05 0.05 0.05 0.05 0.05 0.05 0.05 0.05 0.05 0.05 0.05 0.05 0.05 0.05 0.05
0.05 0.05 0.05 0.05 0.05 0.05 0.05 0.05 0.05 0.05 0.05 0.05 0.05 0.05 0.05 0.05 0.05 0.05 0.05 0.05 0.05 0.05 0.05 0.05
0 0 0 0 0 0 0 0 0 0 0 0 0 0 0 0 0 0 0 0 0 0 0 0

# Continent per cell: 1 North America, 2 Europe, 3 Asia, 4 South America,
# 5 Africa, 6 Oceania.
[continents]
1 1 1 1 1 1 1 1 1 1 2 2 2 2 2 2 3 3 3 3 3 3 3 3
1 1 1 1 1 1 1 1 1 1 2 2 2 2 2 2 3 3 3 3 3 3 3 3
1 1 1 1 1 1 1 1 1 1 2 2 2 2 2 2 3 3 3 3 3 3 3 3
1 1 1 1 1 1 1 1 1 1 2 2 2 2 2 3 3 3 3 3 3 3 3 3
1 1 1 1 1 1 1 1 1 1 5 5 5 5 5 3 3 3 3 3 3 3 3 3
6 6 6 6 4 4 4 4 4 4 5 5 5 5 5 5 3 3 3 3 3 3 3 3
6 6 6 6 4 4 4 4 4 4 5 5 5 5 5 5 3 3 3 3 3 6 6 6
6 6 6 6 4 4 4 4 4 4 5 5 5 5 5 5 5 5 6 6 6 6 6 6
6 6 6 6 4 4 4 4 4 4 5 5 5 5 5 5 5 5 6 6 6 6 6 6
6 6 6 6 4 4 4 4 4 4 5 5 5 5 5 5 5 5 6 6 6 6 6 6
6 6 6 6 4 4 4 4 4 4 5 5 5 5 5 5 5 5 6 6 6 6 6 6
6 6 6 6 4 4 4 4 4 4 5 5 5 5 5 5 5 5 6 6 6 6 6 6
)grid";
}

const char* ContinentRatioTable::bundled_text() {
  return R"ratios(# Inter-continental traffic ratio, percent. Row = source continent, column =
# destination continent. 1 North America, 2 Europe, 3 Asia, 4 South America,
# 5 Africa, 6 Oceania.
86.18 6.74 4.18 1.76 0.45 0.70
25.10 55.88 13.52 1.62 2.84 1.04
24.04 20.89 47.74 1.15 1.75 4.43
52.39 13.02 5.96 25.12 1.85 1.66
25.63 43.34 17.33 3.53 7.95 2.22
26.48 10.58 29.22 2.11 1.49 30.12
)ratios";
}

}  // namespace leosim
