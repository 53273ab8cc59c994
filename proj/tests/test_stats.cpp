#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "cofo/stats.hpp"

using namespace cofo;

namespace {

struct StatsCase {
  std::vector<std::vector<double>> groups;
  double h;
  double p;
  std::vector<double> z;
  std::vector<double> raw_p;
  std::vector<double> adjusted_p;
};

// generated by an independent scipy/statsmodels reference, frozen
const std::vector<StatsCase> kCases = {
  {{{1, 2, 3}, {100, 101, 102}},
   3.857142857142854, 0.049534613435626915,
   {-1.9639610121239317},
   {0.04953461343562668},
   {0.04953461343562668}},
  {{{1, 2, 3, 4}, {1, 2, 3, 4}, {1, 2, 3, 4}},
   0.0, 1.0,
   {0.0, 0.0, 0.0},
   {1.0, 1.0, 1.0},
   {1.0, 1.0, 1.0}},
  {{{2.1, 2.1, 2.1, 3.5}, {2.1, 4.0, 4.0}, {5.0, 5.0, 2.1, 2.1, 6.0}},
   2.619310575635882, 0.2699130826778135,
   {-0.9567402383747521, -1.6062510363543363, -0.4748528976757515},
   {0.3386983828587359, 0.10821876381188422, 0.6348918262971409},
   {0.5080475742881039, 0.32465629143565267, 0.6348918262971409}},
  {{{1, 1, 1}, {1, 1, 1}},
   0.0, 1.0,
   {0.0},
   {1.0},
   {1.0}},
  {{{0, 1, 2, 3, 4, 5, 6, 7, 8, 9}, {5, 6, 7, 8, 9, 10, 11, 12, 13, 14}, {10, 11, 12, 13, 14, 15, 16, 17, 18, 19}},
   19.802118171683396, 5.0121570890404154e-05,
   {-2.224978548867572, -4.449957097735144, -2.224978548867572},
   {0.02608267822532521, 8.588744490414768e-06, 0.02608267822532521},
   {0.02608267822532521, 2.5766233471244304e-05, 0.02608267822532521}},
  {{{-0.8172260670740645, 0.16239054551606213, 0.17966507451359248, -0.9566915365147106, -0.16619760903811298}, {0.5699556136251024, 3.5433155928974895, 0.5112034792427282, -0.5444788063554158, 2.11881194044631}, {2.6, 2.0, 2.9, 0.7, 3.1, 2.4, 2.2, 1.6, 2.1, 3.0}, {4.1, 1.2, -0.5, 1.2, 2.9, 1.7, 3.1, 1.2}, {1.5, 4.9, 1.1}},
   12.024222850222035, 0.01717204397880973,
   {-1.6704706958158022, -3.315285551540307, -2.6157440059092503, -2.230283007399843, -1.3863921397350372, -0.7625231603942093, -0.7836129485458906, 0.684428965646752, 0.2842074752881387, -0.2031968238977135},
   {0.09482627259147752, 0.0009154955408877141, 0.008903328093602947, 0.025728660554561685, 0.16562719528895298, 0.44574782558433, 0.4332672556273546, 0.49370433053208296, 0.776251387127204, 0.8389811952161788},
   {0.2370656814786938, 0.00915495540887714, 0.044516640468014734, 0.08576220184853896, 0.33125439057790595, 0.6171304131651036, 0.6171304131651036, 0.6171304131651036, 0.8389811952161788, 0.8389811952161788}},
  {{{-0.4771040277564027, 1.1327105264210804, 1.0875980462592654, 2.0097053536747174, 1.8254936606385255, 0.5046626701078573, -1.1986701242844546, -0.4495553788479105, -1.090173682072453}, {2.7526294742530864, 1.72857394074025, -0.06413885995705249, 1.3292313085194063, 0.7710661920119036, 1.8513282183569013, 1.3473844133999877, 1.8284792377587866, 3.392095167439038}, {0.9202800645523224, 0.8597525911903836, -0.43083829241393756, -0.7754586591878105}, {-1.6681071825172136, -1.9531315458728449, -2.0748284374996055, -2.1230422346469666, -3.253732691287613}},
   16.09700176366843, 0.0010832202308153718,
   {-1.7520459192036715, 0.3377806696103958, 2.509744174736809, 1.7121985666458002, 3.9904932378315268, 1.7842145377602017},
   {0.07976591236492098, 0.7355284780121412, 0.012081865466625465, 0.08686008151624075, 6.593602914032569e-05, 0.07438881091085676},
   {0.10423209781948889, 0.7355284780121412, 0.036245596399876394, 0.10423209781948889, 0.0003956161748419542, 0.10423209781948889}},
  {{{2.1425231426057625, 1.9783979879895883, 1.4829733911141696, 0.7877581524460148}, {-1.4422455426451664, -2.342599729737344, -1.0364628456605418, -1.101134947680885, -1.4748639747670609}, {-2.1, 2.5, -3.5, -1.4, -3.8, -2.2, -3.7, -3.7, -4.1, -1.7}, {-2.4, -1.9, -0.0, 2.8, -1.9, -1.1, 3.4}},
   9.934509554762734, 0.01913111045944016,
   {1.540250749836653, 2.9181694295414524, 1.088048092780408, 1.2655690246269995, -0.5998930118732925, -2.119380439092553},
   {0.1234992436789275, 0.0035209298029541883, 0.27657387695489644, 0.2056674217024166, 0.5485775399406776, 0.03405832856362003},
   {0.246998487357855, 0.02112557881772513, 0.3318886523458757, 0.3085011325536249, 0.5485775399406776, 0.1021749856908601}},
  {{{0.7, 1.3, -4.6, -0.6, 0.2}, {1.0001860828630937, 4.712636482832983, 3.928969765446134, 4.186076231710791}, {-1.7038493348966115, -1.6989496250693181, 0.4274383120153249, -2.6080328704407316, -1.9603737898884597, -0.9959314458548819, -1.4804611456346355, -1.2026093773305773, -2.3616587167480754, -1.8927649098695367, -1.4369795611280818}},
   10.497532467532466, 0.005253996605667828,
   {-1.675642497007574, 1.3846210039846012, 3.204224754454075},
   {0.0938082394369736, 0.16616838550827262, 0.0013542671171531335},
   {0.1407123591554604, 0.16616838550827262, 0.004062801351459401}},
  {{{-0.6, 1.5, -0.5}, {-1.1184338810894265, -2.503233594991956, -0.74782706844693, 0.2116573310468035, -0.18898782059742303, -1.356238301123681}, {-2.0832168780716582, -3.287878236658992, -2.4062386666844273, 0.5101198825714697, -2.479593235926116, 0.2719017936835537, -3.4707962171631648, -3.1580044175714646}, {-1.0, 0.1, -0.4, -0.9}},
   4.507575757575765, 0.2116155416714112,
   {1.1016189057765002, 1.9342040270917507, 0.5802884574739972, 0.9822953443214376, -0.5201564866102996, -1.4145961441635033},
   {0.27062738558725763, 0.05308804746158993, 0.5617201099216276, 0.32595436750335827, 0.6029545107078149, 0.15718693998205974},
   {0.4889315512550374, 0.3185282847695396, 0.6029545107078149, 0.4889315512550374, 0.6029545107078149, 0.4715608199461792}},
  {{{-2.1, -1.5, -0.8, 1.0, -0.6}, {-2.0, -3.4, 0.6, -1.4, -3.6}, {-2.650458361694565, -0.7911077498488566, 0.6295481767842677, 2.0504041206339854, -0.46766837839107933, 1.8923222205354553}, {-0.2, 2.4, -0.2, 2.0, -0.3, 0.7, -0.2}, {-0.4, 3.7, 3.6, 2.6, 1.6, 5.2, 1.5}},
   15.014036538685858, 0.004672192797190979,
   {0.5749928600720386, -0.9821665784874178, -1.6580171268441617, -2.822510761082536, -1.5827270341230362, -2.2790803984379613, -3.4435740326763353, -0.676022184606498, -1.9016163610154013, -1.2756388630870557},
   {0.565296125808392, 0.3260177897904586, 0.0973140095154574, 0.004764922287463326, 0.11348369375420429, 0.02266228649210584, 0.0005740793974051755, 0.49902656003742374, 0.05722132741681244, 0.20208320944422697},
   {0.565296125808392, 0.40752223723807324, 0.1891394895903405, 0.02382461143731663, 0.1891394895903405, 0.07554095497368614, 0.005740793974051755, 0.5544739555971375, 0.1430533185420311, 0.28869029920603856}},
  {{{0.6833152468375738, 1.0186564728030676, -1.240198626584025, 1.876106674149876, 3.141382096739166, -0.1853674589300478, 1.079168833234524, 3.2918591955153818}, {1.5670760101316352, 0.5995748309962182, -0.16177944762269125, 0.12235796695351225, 2.980113077551412, 0.09029497179852775, 1.48592956598897, 1.2202088827114737, 1.0949003327156404}, {-3.545668502211337, -2.5234814709986506, -2.2179994418293494}, {-1.6212427712654531, 1.5287354646211389, -2.619584403933435}},
   8.538949275362327, 0.036092435504115124,
   {0.18964565153406512, 2.604360005998252, 1.3702381913091846, 2.5065132546332514, 1.2532566273166257, -1.0232797512290386},
   {0.8495868115617637, 0.009204601574815903, 0.1706125601208922, 0.012192848613661048, 0.2101123275299669, 0.30617559479497336},
   {0.8495868115617637, 0.03657854584098315, 0.31516849129495034, 0.03657854584098315, 0.31516849129495034, 0.367410713753968}},
  {{{-1.158531118983602, -3.234782888772212, 0.7748096502912977, 1.1910433053208938}, {-0.7076817877146065, -0.8440714729862154, -2.080552291554529, -1.2044360842630466, -1.4981890586887416, -1.8784216566927454, -2.4880332955458284, -0.8297143802332124, -2.573837097613964, -1.9380118784431906, -1.369913890589447}},
   1.0909090909090935, 0.2962698714842828,
   {1.0444659357341872},
   {0.2962698714842863},
   {0.2962698714842863}},
  {{{1.529779522276164, 1.3307487908906528, 0.959385198343048, 1.31111029388738}, {2.9314991611221384, 1.4007923741814798, -1.8944072413234605, 0.8774784178530508, 0.5165332443450424, 1.2472429302515982, -0.20860859454450464}, {-1.8, -1.8, -0.8, -3.2, -1.4, -1.8, -1.7, -1.2, -1.5}},
   10.864420982068046, 0.00437341770930583,
   {0.9453023852074809, 2.989237849681464, 2.3887339620275965},
   {0.34450452105040597, 0.0027967432636165383, 0.016906539862064973},
   {0.34450452105040597, 0.008390229790849616, 0.02535980979309746}},
  {{{2.5301589397426723, 0.3152112332788122, -1.3571201710061884, -1.6245953703359373, 2.1578759647528076, 4.073541132778811, 1.895899781335827, 1.3426884201139087}, {-1.6, -0.3, -1.6, -1.4, -0.4, -0.9, 0.4}, {-0.4, -0.4, -0.3, -2.0, 0.3}},
   4.7577902460077555, 0.09265289102592887,
   {2.0341707570822303, 1.5750052104573171, -0.26452890784813193},
   {0.04193438186625835, 0.11525524186355934, 0.7913723926419834},
   {0.12580314559877506, 0.17288286279533902, 0.7913723926419834}},
  {{{0.7548390259603283, 0.09808641151997066, 0.15823895579988423, 0.7187485721461331, 1.0521786757762375, 0.05762005232164402, 1.8079163222719175, -1.0801460492192538, 0.6095541418194436, 0.12500848125188513}, {-0.6955695184372354, -0.6654669059743639, -2.6236513698651907, -2.461013970653825, 0.4481939745298411, -3.476798851318428, -1.5203706182265526, 0.6988435192322631, -2.7838829462539705, -0.4382622966824352}, {1.8116347315594046, 2.0103642436179254, 1.8622301775675116}, {1.965129680483921, -1.183838620854795, -0.6605364101204466}},
   12.83874643874644, 0.004998625440362821,
   {2.4265271867494476, -1.6551210881228275, 0.4634339046743919, -3.3036216918931642, -1.1850666990959446, 1.708033640587596},
   {0.015244108125716834, 0.09789993802044825, 0.6430533809049004, 0.0009544453490343806, 0.23599107635306305, 0.08763010059774802},
   {0.0457323243771505, 0.14684990703067238, 0.6430533809049004, 0.005726672094206284, 0.2831892916236756, 0.14684990703067238}},
  {{{-0.013635274790135599, -2.0810402553346607, 0.10695106547482203, -1.0108917458047313, 0.26744601910415255, -0.5968560344413001, -0.800771977837214, -2.625305781962834, -0.636444832631015, -0.4236293421895714}, {1.6566018603727535, 0.9902888506176767, 2.7909419887509586, 2.128900873385139, 1.0755711640862033, 1.2186965677172847, 0.3560129310303042, 1.4472817821587263, 2.6432682165299473, 1.7285945649099674, 1.630263225014889}, {-5.247045888707051, -3.5011589173300717, -4.052071793215007, -0.41196907417925566, 0.5820605284282645, 0.7345824679589077, -1.3641897962494385, -0.45869677660516595, 1.5308527744856955, -2.0878428238971676, -2.134776453703722}, {-0.3883652159417999, -0.06370810139764227, 0.05785549663386702, 0.07341625935653157, -1.5990225854576465, 0.2820482541607692, -0.041759692021748174, -1.4923467662807657, -0.23277702382448207}},
   22.487734487734514, 5.1632933532754994e-05,
   {-3.890595479552414, 0.20842475783316516, -0.6863646554767453, 4.200245856116206, 3.080453143165848, -0.9042499482374781},
   {9.999851912873632e-05, 0.8348973268222912, 0.49248318676341973, 2.6662529963397907e-05, 0.002066858731351452, 0.36586288033820724},
   {0.00029999555738620897, 0.8348973268222912, 0.5909798241161036, 0.00015997517978038746, 0.004133717462702904, 0.5487943205073109}},
  {{{-1.8, -1.0, -4.4, -2.4, -0.0, -3.7, 0.1, -1.9, -1.5, -0.4, -2.5}, {0.9202439498795267, 0.5961279057987653, 0.7667100401408836, 0.7950439994044244, 1.0017766808552269, 1.3372703248046858, 0.8821135566915944, 1.4553912160286915, 0.6797559416706658, 1.024374180658842}, {0.8369374200617119, -1.2409728811152092, -1.0351123547974865, 0.35602821561735704}, {-1.0, -0.9, -0.3, -2.2, -3.2, -1.6, -3.9, -2.2, -4.9, -1.6, -3.0}, {-6.100062041379321, -4.201213764037581, 0.19779684206240344, 2.404593145433048}},
   21.08881742260743, 0.00030408372423545863,
   {-3.7131127129527277, -1.372003018087643, 0.4377535933816139, -0.4195931560170947, 1.3882479132089736, 4.140316476667328, 2.3282074377775492, 1.6916930417197151, 0.7864265607665015, -0.7392831796491668},
   {0.00020472565431022926, 0.17006249827043818, 0.661564914690917, 0.674782688923605, 0.1650615669557849, 3.4682699249818696e-05, 0.019901091435856635, 0.09070451584312461, 0.43161762787347235, 0.4597350608976597},
   {0.0010236282715511463, 0.28343749711739696, 0.674782688923605, 0.674782688923605, 0.28343749711739696, 0.00034682699249818694, 0.06633697145285546, 0.22676128960781153, 0.5746688261220746, 0.5746688261220746}},
  {{{-1.5, 0.3, 0.4, -2.6}, {-0.1649181938651909, 0.8125378139728578, -1.8922230162237765, -3.3330088513514733, -2.0458319933096702, -0.6903048755735662, -0.6931236836990082, -0.8711930612128931, -2.2731079764411035, -2.7957390074922577, -0.6905198486079143}},
   0.42613636363636687, 0.5138908912577118,
   {0.6527912098338667},
   {0.5138908912577136},
   {0.5138908912577136}},
  {{{0.1749012435325219, 0.8743265010146637, 0.7568515989290122, -0.19537115430133722}, {2.045750606215586, 1.4777278992696519, 0.18934037854758234, 1.4655990012953084, 1.1155160632073082}, {2.2, 1.5, 2.8, -2.2, -0.7, 0.3, 0.1, 0.3, -0.2, 0.5, 0.8}},
   2.4433955810930987, 0.2947293531962601,
   {-1.3863910320099648, -0.3290995923958577, 1.3680413154716},
   {0.16562753335170655, 0.7420804123183645, 0.17129914410016145},
   {0.2569487161502422, 0.7420804123183645, 0.2569487161502422}},
};

}  // namespace

TEST_CASE("Kruskal-Wallis matches the frozen reference on 20 cases") {
  for (std::size_t i = 0; i < kCases.size(); ++i) {
    CAPTURE(i);
    const auto res = kruskal_wallis(kCases[i].groups);
    CHECK(res.h_statistic == doctest::Approx(kCases[i].h).epsilon(1e-6));
    CHECK(res.p_value == doctest::Approx(kCases[i].p).epsilon(1e-6));
  }
}

TEST_CASE("Dunn z, raw p and BH-adjusted p match the frozen reference") {
  for (std::size_t i = 0; i < kCases.size(); ++i) {
    CAPTURE(i);
    const auto res = dunn_fdr(kCases[i].groups);
    REQUIRE(res.pairwise.size() == kCases[i].z.size());
    for (std::size_t k = 0; k < res.pairwise.size(); ++k) {
      CAPTURE(k);
      CHECK(res.pairwise[k].z == doctest::Approx(kCases[i].z[k]).epsilon(1e-6));
      CHECK(res.pairwise[k].raw_p == doctest::Approx(kCases[i].raw_p[k]).epsilon(1e-6));
      CHECK(res.pairwise[k].adjusted_p ==
            doctest::Approx(kCases[i].adjusted_p[k]).epsilon(1e-6));
    }
  }
}

TEST_CASE("identical groups: H = 0, p = 1, all adjusted p = 1") {
  const std::vector<std::vector<double>> groups = {{3, 3, 3}, {3, 3}, {3, 3, 3, 3}};
  const auto kw = kruskal_wallis(groups);
  CHECK(kw.h_statistic == 0.0);
  CHECK(kw.p_value == 1.0);
  for (const auto& p : dunn_fdr(groups).pairwise) CHECK(p.adjusted_p == 1.0);
}

TEST_CASE("two separated groups are significant") {
  const auto res = kruskal_wallis({{1, 2, 3}, {100, 101, 102}});
  CHECK(res.p_value < 0.05);
}

TEST_CASE("two groups: BH adjustment is the identity") {
  const auto res = dunn_fdr({{1.0, 5.0, 2.0}, {9.0, 8.0, 7.5}});
  REQUIRE(res.pairwise.size() == 1);
  CHECK(res.pairwise[0].adjusted_p == doctest::Approx(res.pairwise[0].raw_p).epsilon(1e-12));
}

TEST_CASE("rank test is invariant under strictly monotone transforms") {
  const std::vector<std::vector<double>> groups = {
      {0.2, 1.5, 0.9, 4.0}, {2.2, 3.3, 0.1}, {5.0, 2.5, 1.1, 0.4, 6.0}};
  auto transformed = groups;
  for (auto& g : transformed)
    for (auto& v : g) v = std::exp(v) + 3.0;
  const auto a = kruskal_wallis(groups);
  const auto b = kruskal_wallis(transformed);
  CHECK(a.h_statistic == doctest::Approx(b.h_statistic).epsilon(1e-12));
  CHECK(a.p_value == doctest::Approx(b.p_value).epsilon(1e-12));
}

TEST_CASE("BH adjusted p-values are monotone in raw p and never smaller") {
  const std::vector<double> raw = {0.30, 0.01, 0.04, 0.02, 0.9, 0.005};
  const auto adj = benjamini_hochberg(raw);
  REQUIRE(adj.size() == raw.size());
  for (std::size_t i = 0; i < raw.size(); ++i) {
    CHECK(adj[i] >= raw[i] - 1e-15);
    CHECK(adj[i] <= 1.0);
    for (std::size_t j = 0; j < raw.size(); ++j)
      if (raw[i] < raw[j]) CHECK(adj[i] <= adj[j] + 1e-15);
  }
}

TEST_CASE("chi-square tail sanity") {
  CHECK(chi_square_sf(0.0, 3.0) == doctest::Approx(1.0));
  CHECK(chi_square_sf(3.841458820694124, 1.0) == doctest::Approx(0.05).epsilon(1e-9));
  CHECK(chi_square_sf(5.991464547107979, 2.0) == doctest::Approx(0.05).epsilon(1e-9));
}

TEST_CASE("input validation") {
  CHECK_THROWS_AS(kruskal_wallis({{1.0, 2.0}}), ValueError);
  CHECK_THROWS_AS(kruskal_wallis({{1.0}, {}}), ValueError);
}
