#ifndef POLYA_TESTS_REFERENCE_VALUES_HPP
#define POLYA_TESTS_REFERENCE_VALUES_HPP

// Frozen outputs of tests/oracles/generate_reference.py (mpmath, 40 digits).
namespace polya::reference {

inline constexpr double u3_gamma_product = 1.5163860591519780182;
inline constexpr double lgamma_0p001 = 6.9071788853838536825;
inline constexpr double lgamma_0p3 = 1.0957979948180755217;
inline constexpr double lgamma_0p75 = 0.20328095143129537148;
inline constexpr double lgamma_1p5 = -0.12078223763524522235;
inline constexpr double lgamma_3p25 = 0.93580193110872535826;
inline constexpr double lgamma_24p5 = 53.190494526169265444;
inline constexpr double lgamma_100p5 = 361.43554046777762156;
inline constexpr double lgamma_1234p5 = 7550.5509010778948957;
inline constexpr double lgamma_1e6 = 12815504.56914761166;
inline constexpr double scaled_i_0_1 = 0.4657596075936404365;
inline constexpr double scaled_i_0_29p9 = 0.073269219046001905951;
inline constexpr double scaled_i_0_30p1 = 0.073023294131060943593;
inline constexpr double scaled_i_m0p5_2 = 0.28726153811240115694;
inline constexpr double scaled_i_0p3_5 = 0.18166915887022482583;
inline constexpr double scaled_i_2p5_12 = 0.088772802289193039755;
inline constexpr double scaled_i_3_45 = 0.053903511987053904846;
inline constexpr double scaled_i_m0p9_0p01 = 12.256089919613959057;
inline constexpr double scaled_i_0_500 = 0.017845706500153167237;
inline constexpr double upper_gamma_0p5_2 = 0.080647117960317690789;
inline constexpr double upper_gamma_m1p5_0p3 = 2.2387393793796464315;
inline constexpr double upper_gamma_m2_0p7 = 0.33890033094065544398;
inline constexpr double upper_gamma_2p5_10 = 0.0016613173117794600556;
inline constexpr double upper_gamma_m0p5_8 = 0.000012664640824232534839;
inline constexpr double upper_gamma_3_1 = 1.839397205857211608;
inline constexpr double upper_gamma_0_1 = 0.21938393439552027368;
inline constexpr double hurwitz_1p5_1 = 2.6123753486854883433;
inline constexpr double hurwitz_2p5_100 = 0.00067168749945317154206;
inline constexpr double lerch_tail = 0.18612053226868678688;
inline constexpr double u_3 = 1.5163860591519780182;
inline constexpr double u_4 = 1.2394671218484817127;
inline constexpr double u_5 = 1.1563081248402311787;
inline constexpr double u_6 = 1.1169633732266718437;
inline constexpr double u_7 = 1.0939063155878479967;
inline constexpr double u_8 = 1.0786470120169255586;
inline constexpr double u_9 = 1.067746086381403913;
inline constexpr double u_10 = 1.0595437478882610713;

inline constexpr double u_by_dimension[] = {0, 0, 0, u_3, u_4, u_5, u_6, u_7, u_8, u_9, u_10};

} // namespace polya::reference

#endif
