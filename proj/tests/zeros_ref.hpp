#pragma once

#include <vector>

// Imaginary parts of the first 29 nontrivial zeta zeros (all ordinates below
// 100), correctly rounded to double from a 40-digit computation. Shared by
// the zero-store and zero-sum tests.
inline const std::vector<double>& zeros_below_100() {
    static const std::vector<double> z = {
        14.134725141734695,
        21.022039638771556,
        25.01085758014569,
        30.424876125859512,
        32.93506158773919,
        37.586178158825675,
        40.9187190121475,
        43.327073280915,
        48.00515088116716,
        49.7738324776723,
        52.970321477714464,
        56.44624769706339,
        59.34704400260235,
        60.83177852460981,
        65.1125440480816,
        67.07981052949417,
        69.54640171117398,
        72.0671576744819,
        75.70469069908393,
        77.1448400688748,
        79.33737502024937,
        82.91038085408603,
        84.73549298051705,
        87.42527461312523,
        88.80911120763446,
        92.49189927055849,
        94.65134404051989,
        95.87063422824531,
        98.83119421819369,
    };
    return z;
}
