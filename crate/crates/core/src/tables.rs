//! Critical-value tables for the rank-based significance tests.
//!
//! Upper critical values of the F distribution (df1 = 1..19 by rows,
//! df2 over `DF2_GRID` plus the limiting value), of the chi-square
//! distribution (df = 1..19), and studentized-range-derived constants
//! for the Nemenyi test (k = 2..20), at the 0.05 and 0.10 levels.

/// Finite df2 grid points; values beyond 120 interpolate toward the
/// limiting entry (stored last in each row).
pub const DF2_GRID: [usize; 33] = [
    1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12, 13, 14, 15, 16, 17, 18, 19, 20, 21, 22, 23, 24, 25, 26, 27, 28, 29, 30, 40, 60, 120];

/// F critical values at alpha = 0.05: row df1-1, column follows
/// `DF2_GRID` with the limiting value appended.
pub const F_CRIT_05: [[f64; 34]; 19] = [
    [161.4476, 18.5128, 10.1280, 7.7086, 6.6079, 5.9874, 5.5914, 5.3177, 5.1174, 4.9646, 4.8443, 4.7472, 4.6672, 4.6001, 4.5431, 4.4940, 4.4513, 4.4139, 4.3807, 4.3512, 4.3248, 4.3009, 4.2793, 4.2597, 4.2417, 4.2252, 4.2100, 4.1960, 4.1830, 4.1709, 4.0847, 4.0012, 3.9201, 3.8415],
    [199.5000, 19.0000, 9.5521, 6.9443, 5.7861, 5.1433, 4.7374, 4.4590, 4.2565, 4.1028, 3.9823, 3.8853, 3.8056, 3.7389, 3.6823, 3.6337, 3.5915, 3.5546, 3.5219, 3.4928, 3.4668, 3.4434, 3.4221, 3.4028, 3.3852, 3.3690, 3.3541, 3.3404, 3.3277, 3.3158, 3.2317, 3.1504, 3.0718, 2.9958],
    [215.7073, 19.1643, 9.2766, 6.5914, 5.4095, 4.7571, 4.3468, 4.0662, 3.8625, 3.7083, 3.5874, 3.4903, 3.4105, 3.3439, 3.2874, 3.2389, 3.1968, 3.1599, 3.1274, 3.0984, 3.0725, 3.0491, 3.0280, 3.0088, 2.9912, 2.9752, 2.9604, 2.9467, 2.9340, 2.9223, 2.8387, 2.7581, 2.6802, 2.6049],
    [224.5832, 19.2468, 9.1172, 6.3882, 5.1922, 4.5337, 4.1203, 3.8379, 3.6331, 3.4780, 3.3567, 3.2592, 3.1791, 3.1122, 3.0556, 3.0069, 2.9647, 2.9277, 2.8951, 2.8661, 2.8401, 2.8167, 2.7955, 2.7763, 2.7587, 2.7426, 2.7278, 2.7141, 2.7014, 2.6896, 2.6060, 2.5252, 2.4472, 2.3719],
    [230.1619, 19.2964, 9.0135, 6.2561, 5.0503, 4.3874, 3.9715, 3.6875, 3.4817, 3.3258, 3.2039, 3.1059, 3.0254, 2.9582, 2.9013, 2.8524, 2.8100, 2.7729, 2.7401, 2.7109, 2.6848, 2.6613, 2.6400, 2.6207, 2.6030, 2.5868, 2.5719, 2.5581, 2.5454, 2.5336, 2.4495, 2.3683, 2.2899, 2.2141],
    [233.9860, 19.3295, 8.9406, 6.1631, 4.9503, 4.2839, 3.8660, 3.5806, 3.3738, 3.2172, 3.0946, 2.9961, 2.9153, 2.8477, 2.7905, 2.7413, 2.6987, 2.6613, 2.6283, 2.5990, 2.5727, 2.5491, 2.5277, 2.5082, 2.4904, 2.4741, 2.4591, 2.4453, 2.4324, 2.4205, 2.3359, 2.2541, 2.1750, 2.0986],
    [236.7684, 19.3532, 8.8867, 6.0942, 4.8759, 4.2067, 3.7870, 3.5005, 3.2927, 3.1355, 3.0123, 2.9134, 2.8321, 2.7642, 2.7066, 2.6572, 2.6143, 2.5767, 2.5435, 2.5140, 2.4876, 2.4638, 2.4422, 2.4226, 2.4047, 2.3883, 2.3732, 2.3593, 2.3463, 2.3343, 2.2490, 2.1665, 2.0868, 2.0096],
    [238.8827, 19.3710, 8.8452, 6.0410, 4.8183, 4.1468, 3.7257, 3.4381, 3.2296, 3.0717, 2.9480, 2.8486, 2.7669, 2.6987, 2.6408, 2.5911, 2.5480, 2.5102, 2.4768, 2.4471, 2.4205, 2.3965, 2.3748, 2.3551, 2.3371, 2.3205, 2.3053, 2.2913, 2.2783, 2.2662, 2.1802, 2.0970, 2.0164, 1.9384],
    [240.5433, 19.3848, 8.8123, 5.9988, 4.7725, 4.0990, 3.6767, 3.3881, 3.1789, 3.0204, 2.8962, 2.7964, 2.7144, 2.6458, 2.5876, 2.5377, 2.4943, 2.4563, 2.4227, 2.3928, 2.3660, 2.3419, 2.3201, 2.3002, 2.2821, 2.2655, 2.2501, 2.2360, 2.2229, 2.2107, 2.1240, 2.0401, 1.9588, 1.8799],
    [241.8817, 19.3959, 8.7855, 5.9644, 4.7351, 4.0600, 3.6365, 3.3472, 3.1373, 2.9782, 2.8536, 2.7534, 2.6710, 2.6022, 2.5437, 2.4935, 2.4499, 2.4117, 2.3779, 2.3479, 2.3210, 2.2967, 2.2747, 2.2547, 2.2365, 2.2197, 2.2043, 2.1900, 2.1768, 2.1646, 2.0772, 1.9926, 1.9105, 1.8307],
    [242.9835, 19.4050, 8.7633, 5.9358, 4.7040, 4.0274, 3.6030, 3.3130, 3.1025, 2.9430, 2.8179, 2.7173, 2.6347, 2.5655, 2.5068, 2.4564, 2.4126, 2.3742, 2.3402, 2.3100, 2.2829, 2.2585, 2.2364, 2.2163, 2.1979, 2.1811, 2.1655, 2.1512, 2.1379, 2.1256, 2.0376, 1.9522, 1.8693, 1.7887],
    [243.9060, 19.4125, 8.7446, 5.9117, 4.6777, 3.9999, 3.5747, 3.2839, 3.0729, 2.9130, 2.7876, 2.6866, 2.6037, 2.5342, 2.4753, 2.4247, 2.3807, 2.3421, 2.3080, 2.2776, 2.2504, 2.2258, 2.2036, 2.1834, 2.1649, 2.1479, 2.1323, 2.1179, 2.1045, 2.0921, 2.0035, 1.9174, 1.8337, 1.7522],
    [244.6898, 19.4189, 8.7287, 5.8911, 4.6552, 3.9764, 3.5503, 3.2590, 3.0475, 2.8872, 2.7614, 2.6602, 2.5769, 2.5073, 2.4481, 2.3973, 2.3531, 2.3143, 2.2800, 2.2495, 2.2222, 2.1975, 2.1752, 2.1548, 2.1362, 2.1192, 2.1035, 2.0889, 2.0755, 2.0630, 1.9738, 1.8870, 1.8026, 1.7202],
    [245.3640, 19.4244, 8.7149, 5.8733, 4.6358, 3.9559, 3.5292, 3.2374, 3.0255, 2.8647, 2.7386, 2.6371, 2.5536, 2.4837, 2.4244, 2.3733, 2.3290, 2.2900, 2.2556, 2.2250, 2.1975, 2.1727, 2.1502, 2.1298, 2.1111, 2.0939, 2.0781, 2.0635, 2.0500, 2.0374, 1.9476, 1.8602, 1.7750, 1.6918],
    [245.9499, 19.4291, 8.7029, 5.8578, 4.6188, 3.9381, 3.5107, 3.2184, 3.0061, 2.8450, 2.7186, 2.6169, 2.5331, 2.4630, 2.4034, 2.3522, 2.3077, 2.2686, 2.2341, 2.2033, 2.1757, 2.1508, 2.1282, 2.1077, 2.0889, 2.0716, 2.0558, 2.0411, 2.0275, 2.0148, 1.9245, 1.8364, 1.7505, 1.6664],
    [246.4639, 19.4333, 8.6923, 5.8441, 4.6038, 3.9223, 3.4944, 3.2016, 2.9890, 2.8276, 2.7009, 2.5989, 2.5149, 2.4446, 2.3849, 2.3335, 2.2888, 2.2496, 2.2149, 2.1840, 2.1563, 2.1313, 2.1086, 2.0880, 2.0691, 2.0518, 2.0358, 2.0210, 2.0073, 1.9946, 1.9037, 1.8151, 1.7285, 1.6435],
    [246.9184, 19.4370, 8.6829, 5.8320, 4.5904, 3.9083, 3.4799, 3.1867, 2.9737, 2.8120, 2.6851, 2.5828, 2.4987, 2.4282, 2.3683, 2.3167, 2.2719, 2.2325, 2.1977, 2.1667, 2.1389, 2.1138, 2.0910, 2.0703, 2.0513, 2.0339, 2.0179, 2.0030, 1.9893, 1.9765, 1.8851, 1.7959, 1.7085, 1.6228],
    [247.3232, 19.4402, 8.6745, 5.8211, 4.5785, 3.8957, 3.4669, 3.1733, 2.9600, 2.7980, 2.6709, 2.5684, 2.4841, 2.4134, 2.3533, 2.3016, 2.2567, 2.2172, 2.1823, 2.1511, 2.1232, 2.0980, 2.0751, 2.0543, 2.0353, 2.0178, 2.0017, 1.9868, 1.9730, 1.9601, 1.8682, 1.7784, 1.6904, 1.6039],
    [247.6861, 19.4431, 8.6670, 5.8114, 4.5678, 3.8844, 3.4551, 3.1613, 2.9477, 2.7854, 2.6581, 2.5554, 2.4709, 2.4000, 2.3398, 2.2880, 2.2429, 2.2033, 2.1683, 2.1370, 2.1090, 2.0837, 2.0608, 2.0399, 2.0207, 2.0032, 1.9870, 1.9720, 1.9581, 1.9452, 1.8529, 1.7625, 1.6739, 1.5865],
];

/// F critical values at alpha = 0.10: row df1-1, column follows
/// `DF2_GRID` with the limiting value appended.
pub const F_CRIT_10: [[f64; 34]; 19] = [
    [39.8635, 8.5263, 5.5383, 4.5448, 4.0604, 3.7759, 3.5894, 3.4579, 3.3603, 3.2850, 3.2252, 3.1765, 3.1362, 3.1022, 3.0732, 3.0481, 3.0262, 3.0070, 2.9899, 2.9747, 2.9610, 2.9486, 2.9374, 2.9271, 2.9177, 2.9091, 2.9012, 2.8938, 2.8870, 2.8807, 2.8354, 2.7911, 2.7478, 2.7056],
    [49.5000, 9.0000, 5.4624, 4.3246, 3.7797, 3.4633, 3.2574, 3.1131, 3.0065, 2.9245, 2.8595, 2.8068, 2.7632, 2.7265, 2.6952, 2.6682, 2.6446, 2.6239, 2.6056, 2.5893, 2.5746, 2.5613, 2.5493, 2.5383, 2.5283, 2.5191, 2.5106, 2.5028, 2.4955, 2.4887, 2.4404, 2.3933, 2.3473, 2.3026],
    [53.5932, 9.1618, 5.3908, 4.1909, 3.6195, 3.2888, 3.0741, 2.9238, 2.8129, 2.7277, 2.6602, 2.6055, 2.5603, 2.5222, 2.4898, 2.4618, 2.4374, 2.4160, 2.3970, 2.3801, 2.3649, 2.3512, 2.3387, 2.3274, 2.3170, 2.3075, 2.2987, 2.2906, 2.2831, 2.2761, 2.2261, 2.1774, 2.1300, 2.0838],
    [55.8330, 9.2434, 5.3426, 4.1072, 3.5202, 3.1808, 2.9605, 2.8064, 2.6927, 2.6053, 2.5362, 2.4801, 2.4337, 2.3947, 2.3614, 2.3327, 2.3077, 2.2858, 2.2663, 2.2489, 2.2333, 2.2193, 2.2065, 2.1949, 2.1842, 2.1745, 2.1655, 2.1571, 2.1494, 2.1422, 2.0909, 2.0410, 1.9923, 1.9449],
    [57.2401, 9.2926, 5.3092, 4.0506, 3.4530, 3.1075, 2.8833, 2.7264, 2.6106, 2.5216, 2.4512, 2.3940, 2.3467, 2.3069, 2.2730, 2.2438, 2.2183, 2.1958, 2.1760, 2.1582, 2.1423, 2.1279, 2.1149, 2.1030, 2.0922, 2.0822, 2.0730, 2.0645, 2.0566, 2.0492, 1.9968, 1.9457, 1.8959, 1.8473],
    [58.2044, 9.3255, 5.2847, 4.0097, 3.4045, 3.0546, 2.8274, 2.6683, 2.5509, 2.4606, 2.3891, 2.3310, 2.2830, 2.2426, 2.2081, 2.1783, 2.1524, 2.1296, 2.1094, 2.0913, 2.0751, 2.0605, 2.0472, 2.0351, 2.0241, 2.0139, 2.0045, 1.9959, 1.9878, 1.9803, 1.9269, 1.8747, 1.8238, 1.7741],
    [58.9060, 9.3491, 5.2662, 3.9790, 3.3679, 3.0145, 2.7849, 2.6241, 2.5053, 2.4140, 2.3416, 2.2828, 2.2341, 2.1931, 2.1582, 2.1280, 2.1017, 2.0785, 2.0580, 2.0397, 2.0233, 2.0084, 1.9949, 1.9826, 1.9714, 1.9610, 1.9515, 1.9427, 1.9345, 1.9269, 1.8725, 1.8194, 1.7675, 1.7167],
    [59.4390, 9.3668, 5.2517, 3.9549, 3.3393, 2.9830, 2.7516, 2.5893, 2.4694, 2.3772, 2.3040, 2.2446, 2.1953, 2.1539, 2.1185, 2.0880, 2.0613, 2.0379, 2.0171, 1.9985, 1.9819, 1.9668, 1.9531, 1.9407, 1.9292, 1.9188, 1.9091, 1.9001, 1.8918, 1.8841, 1.8289, 1.7748, 1.7220, 1.6702],
    [59.8576, 9.3805, 5.2400, 3.9357, 3.3163, 2.9577, 2.7247, 2.5612, 2.4403, 2.3473, 2.2735, 2.2135, 2.1638, 2.1220, 2.0862, 2.0553, 2.0284, 2.0047, 1.9836, 1.9649, 1.9480, 1.9327, 1.9189, 1.9063, 1.8947, 1.8841, 1.8743, 1.8652, 1.8568, 1.8490, 1.7929, 1.7380, 1.6842, 1.6315],
    [60.1950, 9.3916, 5.2304, 3.9199, 3.2974, 2.9369, 2.7025, 2.5380, 2.4163, 2.3226, 2.2482, 2.1878, 2.1376, 2.0954, 2.0593, 2.0281, 2.0009, 1.9770, 1.9557, 1.9367, 1.9197, 1.9043, 1.8903, 1.8775, 1.8658, 1.8550, 1.8451, 1.8359, 1.8274, 1.8195, 1.7627, 1.7070, 1.6524, 1.5987],
    [60.4727, 9.4006, 5.2224, 3.9067, 3.2816, 2.9195, 2.6839, 2.5186, 2.3961, 2.3018, 2.2269, 2.1660, 2.1155, 2.0729, 2.0366, 2.0051, 1.9777, 1.9535, 1.9321, 1.9129, 1.8956, 1.8801, 1.8659, 1.8530, 1.8412, 1.8303, 1.8203, 1.8110, 1.8024, 1.7944, 1.7369, 1.6805, 1.6250, 1.5705],
    [60.7052, 9.4081, 5.2156, 3.8955, 3.2682, 2.9047, 2.6681, 2.5020, 2.3789, 2.2841, 2.2087, 2.1474, 2.0966, 2.0537, 2.0171, 1.9854, 1.9577, 1.9333, 1.9117, 1.8924, 1.8750, 1.8593, 1.8450, 1.8319, 1.8200, 1.8090, 1.7989, 1.7895, 1.7808, 1.7727, 1.7146, 1.6574, 1.6012, 1.5458],
    [60.9028, 9.4145, 5.2098, 3.8859, 3.2567, 2.8920, 2.6545, 2.4876, 2.3640, 2.2687, 2.1930, 2.1313, 2.0802, 2.0370, 2.0001, 1.9682, 1.9404, 1.9158, 1.8940, 1.8745, 1.8570, 1.8411, 1.8267, 1.8136, 1.8015, 1.7904, 1.7802, 1.7708, 1.7620, 1.7538, 1.6950, 1.6372, 1.5803, 1.5240],
    [61.0727, 9.4200, 5.2047, 3.8776, 3.2468, 2.8809, 2.6426, 2.4752, 2.3510, 2.2553, 2.1792, 2.1173, 2.0658, 2.0224, 1.9853, 1.9532, 1.9252, 1.9004, 1.8785, 1.8588, 1.8412, 1.8252, 1.8107, 1.7974, 1.7853, 1.7741, 1.7638, 1.7542, 1.7454, 1.7371, 1.6778, 1.6193, 1.5617, 1.5046],
    [61.2203, 9.4247, 5.2003, 3.8704, 3.2380, 2.8712, 2.6322, 2.4642, 2.3396, 2.2435, 2.1671, 2.1049, 2.0532, 2.0095, 1.9722, 1.9399, 1.9117, 1.8868, 1.8647, 1.8449, 1.8271, 1.8111, 1.7964, 1.7831, 1.7708, 1.7596, 1.7492, 1.7395, 1.7306, 1.7223, 1.6624, 1.6034, 1.5450, 1.4871],
    [61.3499, 9.4289, 5.1964, 3.8639, 3.2303, 2.8626, 2.6230, 2.4545, 2.3295, 2.2330, 2.1563, 2.0938, 2.0419, 1.9981, 1.9605, 1.9281, 1.8997, 1.8747, 1.8524, 1.8325, 1.8146, 1.7984, 1.7837, 1.7703, 1.7579, 1.7466, 1.7361, 1.7264, 1.7174, 1.7090, 1.6486, 1.5890, 1.5300, 1.4714],
    [61.4644, 9.4325, 5.1929, 3.8582, 3.2234, 2.8550, 2.6148, 2.4458, 2.3205, 2.2237, 2.1467, 2.0839, 2.0318, 1.9878, 1.9501, 1.9175, 1.8889, 1.8638, 1.8414, 1.8214, 1.8034, 1.7871, 1.7723, 1.7587, 1.7463, 1.7349, 1.7243, 1.7146, 1.7055, 1.6970, 1.6362, 1.5760, 1.5164, 1.4570],
    [61.5664, 9.4358, 5.1898, 3.8531, 3.2172, 2.8481, 2.6074, 2.4380, 2.3123, 2.2153, 2.1380, 2.0750, 2.0227, 1.9785, 1.9407, 1.9079, 1.8792, 1.8539, 1.8314, 1.8113, 1.7932, 1.7768, 1.7619, 1.7483, 1.7358, 1.7243, 1.7137, 1.7039, 1.6947, 1.6862, 1.6249, 1.5642, 1.5039, 1.4439],
    [61.6579, 9.4387, 5.1870, 3.8485, 3.2117, 2.8419, 2.6008, 2.4310, 2.3050, 2.2077, 2.1302, 2.0670, 2.0145, 1.9701, 1.9321, 1.8992, 1.8704, 1.8450, 1.8224, 1.8022, 1.7840, 1.7675, 1.7525, 1.7388, 1.7263, 1.7147, 1.7040, 1.6941, 1.6849, 1.6763, 1.6146, 1.5534, 1.4926, 1.4318],
];

/// Chi-square critical values at alpha = 0.05 for df = 1..19.
pub const CHI2_CRIT_05: [f64; 19] = [3.8415, 5.9915, 7.8147, 9.4877, 11.0705, 12.5916, 14.0671, 15.5073, 16.9190, 18.3070, 19.6751, 21.0261, 22.3620, 23.6848, 24.9958, 26.2962, 27.5871, 28.8693, 30.1435];

/// Chi-square critical values at alpha = 0.10 for df = 1..19.
pub const CHI2_CRIT_10: [f64; 19] = [2.7055, 4.6052, 6.2514, 7.7794, 9.2364, 10.6446, 12.0170, 13.3616, 14.6837, 15.9872, 17.2750, 18.5493, 19.8119, 21.0641, 22.3071, 23.5418, 24.7690, 25.9894, 27.2036];

/// Nemenyi q constants at alpha = 0.05 for k = 2..20 methods
/// (studentized range quantile at infinite df over sqrt(2)).
pub const NEMENYI_Q_05: [f64; 19] = [1.9600, 2.3437, 2.5690, 2.7278, 2.8497, 2.9483, 3.0309, 3.1017, 3.1637, 3.2187, 3.2680, 3.3127, 3.3536, 3.3912, 3.4260, 3.4584, 3.4887, 3.5171, 3.5438];

/// Nemenyi q constants at alpha = 0.10 for k = 2..20 methods
/// (studentized range quantile at infinite df over sqrt(2)).
pub const NEMENYI_Q_10: [f64; 19] = [1.6449, 2.0523, 2.2913, 2.4595, 2.5885, 2.6927, 2.7799, 2.8546, 2.9199, 2.9778, 3.0297, 3.0767, 3.1197, 3.1592, 3.1957, 3.2297, 3.2615, 3.2912, 3.3192];
