#pragma once

// Generated by gen_bessel_table.py (mpmath, 40 digits).

struct K01Ref {
  double zr, zi, k0r, k0i, k1r, k1i;
};

inline constexpr K01Ref kK01Table[] = {
    {8.7266418294910483191e-5, -4.9999923845664387412e-2, 3.1090978873751623594, 1.5680615327602713137, -4.464801206825904931e-3, 2.0090158525773200657e+1},
    {2.5000000000000001388e-2, -4.3301270189221932605e-2, 3.1109453928698146616, 1.0446451375492458025, 9.93221578487385397, 1.7385621098520759858e+1},
    {4.3301270189221932605e-2, -2.5000000000000001388e-2, 3.1132319093669727634, 5.2153648131618946892e-1, 1.723576418874848555e+1, 1.0033843629150282421e+1},
    {5.0000000000000002776e-2, 0.0, 3.1142340294719898387, 0.0, 1.9909674325882505397e+1, 0.0},
    {4.6984631039295420007e-2, 1.7101007166283436339e-2, 3.1137727087228890304, -3.4758070865724221404e-1, 1.8706001982555067835e+1, -6.8631121961771925593},
    {3.5355339059327375861e-2, 3.5355339059327375861e-2, 3.1121542127014099963, -7.8282829686368677926e-1, 1.4064425575095835753e+1, -1.4192125844938094409e+1},
    {1.2940952255126038709e-2, 4.8296291314453419774e-2, 3.1098474619297849963, -1.3070039825885846949, 5.1214331912129070928, -1.9397244811799785898e+1},
    {8.726203218641756694e-4, 4.9992384757819564867e-2, 3.109129885243893257, -1.5522832846401548713, 3.0865856245823850042e-1, -2.0086520616748624885e+1},
    {0.0, 5.0000000000000002776e-2, 3.1090944496684035178, -1.569814732478076369, -3.925763760182007882e-2, -2.009025752312035615e+1},
    {8.7266418294910485902e-4, -4.9999923845664384636e-1, 6.9858075541248895992e-1, 1.472128424831505434, -3.77129182590275613e-1, 2.310758547728221402},
    {2.5e-1, -4.3301270189221929829e-1, 8.0723099859552669107e-1, 9.1800191805086927906e-1, 6.2569889318244465505e-1, 1.892539896942931533},
    {4.3301270189221929829e-1, -2.5e-1, 8.9325039256520736622e-1, 4.3982997347942347884e-1, 1.3792407996779382258, 1.0664961709929170802},
    {5.0e-1, 0.0, 9.2441907122766586178e-1, 0.0, 1.6564411200033008937, 0.0},
    {4.6984631039295421395e-1, 1.7101007166283435645e-1, 9.1043711060713357978e-1, -2.9092176648551344156e-1, 1.5316082797278016802, -7.2674149741335007182e-1},
    {3.5355339059327378637e-1, 3.5355339059327378637e-1, 8.5590587211863415149e-1, -6.7158169509436759184e-1, 1.0511820854125225621, -1.5224034065320900403},
    {1.2940952255126036974e-1, 4.8296291314453415611e-1, 7.5209482742674200997e-1, -1.1841858320769467607, 1.3522094844917567703e-1, -2.1590779778632864369},
    {8.7262032186417558266e-3, 4.9992384757819563479e-1, 7.0159533576638948698e-1, -1.4540304805085195749, -3.4626537376685770089e-1, -2.3048970545672523704},
    {0.0, 5.0e-1, 6.9824839378385419478e-1, -1.4741449260217835842, -3.805544034139567812e-1, -2.3113834293865155728},
    {1.745328365898209718e-3, -9.9999847691328769272e-1, -1.3742750420479772224e-1, 1.1998298053830534589, -6.8884614508111268353e-1, 1.2262348196806881524},
    {5.0e-1, -8.6602540378443859659e-1, 1.7721481061835238118e-1, 6.8881473211471089056e-1, -2.2125286872964584248e-2, 9.3106799319827177659e-1},
    {8.6602540378443859659e-1, -5.0e-1, 3.6238958839341486779e-1, 3.2126957559263313377e-1, 4.3914510255294278049e-1, 5.1609739281451826604e-1},
    {1.0, 0.0, 4.2102443824070833334e-1, 0.0, 6.0190723019723457474e-1, 0.0},
    {9.3969262078590842791e-1, 3.4202014332566871291e-1, 3.9518914606865331284e-1, -2.1185513192993391703e-1, 5.2901308826229695105e-1, -3.5118481979057587428e-1},
    {7.0710678118654757274e-1, 7.0710678118654757274e-1, 2.8670620872831599847e-1, -4.9499463651871987626e-1, 2.419959664297381509e-1, -7.4032227684198264944e-1},
    {2.5881904510252073948e-1, 9.6592582628906831221e-1, 3.3414633103820106225e-2, -9.1735453994869277933e-1, -3.4014551620527780285e-1, -1.0894898619839392067},
    {1.7452406437283511653e-2, 9.9984769515639126958e-1, -1.2659209080881067514e-1, -1.1807340566116694876, -6.6739499205808698118e-1, -1.2182109150699313902},
    {0.0, 1.0, -1.3863371520405399968e-1, -1.2019697153172064991, -6.9122984369208426288e-1, -1.2271262301435714892},
    {3.473203448137437109e-3, -1.9899969690574426107, -7.9682560652639036462e-1, 3.6013835763090112272e-1, -9.0381516523027567528e-1, 1.7733020894802477115e-1},
    {9.9499999999999999556e-1, -1.7233905535310329871, -1.8787843503357314479e-1, 2.5585558466927316979e-1, -2.6231043577041007382e-1, 2.5305365479235433922e-1},
    {1.7233905535310329871, -9.9499999999999999556e-1, 4.9948102088529352637e-2, 1.4271083953654342972e-1, 4.4741155983092107208e-2, 1.7716308186316894389e-1},
    {1.9899999999999999911, 0.0, 1.1530176755177679973e-1, 0.0, 1.4171756162240130702e-1, 0.0},
    {1.8699883153639575983, 6.8062008521808081696e-1, 8.6955278439048367605e-2, -9.6987597571635742004e-2, 9.8787447873329930272e-2, -1.2446903721975211688e-1},
    {1.4071424945612296398, 1.4071424945612296398, -4.0585656714261100375e-2, -2.0460572926266774538e-1, -7.9300620576348923742e-2, -2.3369988847469511191e-1},
    {5.1504989975401627156e-1, 1.9221923943152459113, -4.2285805926551134246e-1, -2.9929214367180794623e-1, -5.2428885279029042425e-1, -2.2921191132590577075e-1},
    {3.4730288810194187565e-2, 1.9896969133612185665, -7.6895087152925622998e-1, -3.548142359123222408e-1, -8.7643008260252994e-1, -1.8037231981560033323e-1},
    {0.0, 1.9899999999999999911, -7.9997062971829210007e-1, -3.6075094430617860131e-1, -9.0689846452562359409e-1, -1.769995424469982879e-1},
    {3.5081100154554008957e-3, -2.0099969385957079382, -8.0016380160251076131e-1, 3.4207612357973564271e-1, -9.0178107444528179768e-1, 1.5966247602128413039e-1},
    {1.0049999999999998934, -1.7407110616067213993, -1.8956701890275067646e-1, 2.4882427548427851858e-1, -2.6217109967514613726e-1, 2.4477225266152615999e-1},
    {1.7407110616067213993, -1.0049999999999998934, 4.7443623323209114357e-2, 1.4010844022106015954e-1, 4.2049877276521680351e-2, 1.7344770069366111026e-1},
    {2.0099999999999997868, 0.0, 1.1250436099872804751e-1, 0.0, 1.3804087731920770533e-1, 0.0},
    {1.8887821677796756692, 6.8746048808459403467e-1, 8.4286278231518205213e-2, -9.533609338838326719e-2, 9.5549021973507340546e-2, -1.2201504979685761579e-1},
    {1.4212846301849604291, 1.4212846301849604291, -4.2717800802663113215e-2, -2.0020956301955458018e-1, -8.077341346558302717e-2, -2.2794014511777587797e-1},
    {5.2022628065606668635e-1, 1.9415109108410271155, -4.2446107078656781422e-1, -2.8802483774373636661e-1, -5.2253432213013389532e-1, -2.1727462358164487132e-1},
    {3.5079336938939859047e-2, 2.0096938672643460677, -7.7207954805008092324e-1, -3.3724898512810086452e-1, -8.7432654696670074923e-1, -1.6312547290885293623e-1},
    {0.0, 2.0099999999999997868, -8.033332583204325411e-1, -3.4263280971409018371e-1, -9.0487307488486283954e-1, -1.5928443712107641343e-1},
    {5.2359850976946287204e-3, -2.9999954307398630782, -5.8917405848307400834e-1, -4.0582391212508361162e-1, -5.3038968529298087741e-1, -5.069352130662403725e-1},
    {1.5, -2.5980762113533160118, -1.5765243364800330418e-1, 7.9726969798186778267e-3, -1.7242291533488265955e-1, -1.2356006737505218708e-2},
    {2.5980762113533160118, -1.5, -9.0476367947297273606e-3, 5.1315125231431964873e-2, -1.41180996487074913e-2, 5.7716939720424264053e-2},
    {3.0, 0.0, 3.4739504386279248072e-2, 0.0, 4.0156431128194184377e-2, 0.0},
    {2.8190778623577252837, 1.0260604299770061942, 1.5516721427972960048e-2, -3.8698987292808846138e-2, 1.585044565304303807e-2, -4.5206493398742561089e-2},
    {2.1213203435596423851, 2.1213203435596423851, -6.7029233303798703464e-2, -5.1121884045986805882e-2, -8.0270222523922203833e-2, -4.9898307787514939897e-2},
    {7.7645713530756232945e-1, 2.8977774788672050477, -3.0516325827052201396e-1, 1.2001054404431726474e-1, -3.0265821227827575932e-1, 1.7277580070149150793e-1},
    {5.2357219311850541899e-2, 2.9995430854691735867, -5.648606244791173965e-1, 3.8234229564686339073e-1, -5.1113116910329235245e-1, 4.7993081622070320314e-1},
    {0.0, 3.0, -5.9195461148071114392e-1, 4.0848865553578915389e-1, -5.3259256661944418524e-1, 5.0999739386720532367e-1},
    {1.0471970195389257441e-2, -5.9999908614797261563, 4.4816860776165579487e-1, 2.3376716304810561989e-1, 4.3037625174748237168e-1, 2.7168367119199236648e-1},
    {3.0, -5.1961524227066320236, 2.1074265474538229661e-2, -1.3807796702301246336e-2, 2.2934772846754967166e-2, -1.2940840369076977045e-2},
    {5.1961524227066320236, -3.0, -2.7680361508349288887e-3, -3.0865427745552722404e-4, -2.9510440304933070181e-3, -4.3872480673982614847e-4},
    {6.0, 0.0, 1.2439943280131230852e-3, 0.0, 1.3439197177355090057e-3, 0.0},
    {5.6381557247154505674, 2.0521208599540123885, -1.0816010601199297201e-3, -1.423826151666695576e-3, -1.2016625165193892205e-3, -1.5030706356234018571e-3},
    {4.2426406871192847703, 4.2426406871192847703, -6.530375083472813874e-4, 7.2164915444254630986e-3, -2.8834994194577026015e-4, 7.6760896723380163918e-3},
    {1.5529142706151246589, 5.7955549577344100953, 1.0639200181461140404e-1, -1.583585536204517881e-2, 1.0771697399554949052e-1, -2.4567239837585714001e-2},
    {1.047144386237010838e-1, 5.9990861709383471734, 4.0956925166989047266e-1, -2.0911836307716841657e-1, 3.9423224970989771351e-1, -2.4397551976750166952e-1},
    {0.0, 6.0, 4.5269515100008056687e-1, -2.3663301673893824578e-1, 4.3461398803022036006e-1, -2.7490560597817574345e-1},
    {2.6179925488473143602e-2, -1.4999977153699315835e+1, -3.1441763207096899712e-1, -2.1484816990941071342e-2, -3.1389402082131738411e-1, -3.1966405700473585199e-2},
    {7.5, -1.2990381056766580059e+1, 1.0501805150805629429e-4, 1.4398512503148407498e-4, 1.0270622277216123571e-4, 1.4940123149025252197e-4},
    {1.2990381056766580059e+1, -7.5, 7.0381938285618159072e-8, 7.2992734265124066751e-7, 6.0555192619209723612e-8, 7.5193845882619870088e-7},
    {1.5e+1, 0.0, 9.819536482396434541e-8, 0.0, 1.014172936976209181e-7, 0.0},
    {1.4095389311788625974e+1, 5.1303021498850309712, 1.3500588728456772437e-7, 2.0173997892638616295e-7, 1.4141336017179252944e-7, 2.0648200464336160191e-7},
    {1.0606601717798213258e+1, 1.0606601717798213258e+1, -1.51434720734689405e-8, 7.9628943983776233573e-6, 1.679694873684531254e-7, 8.1507497776154470317e-6},
    {3.8822856765378115362, 1.4488887394336023462e+1, -5.5910583074734229444e-3, -3.6032547277270786602e-3, -5.7567625028800189053e-3, -3.4576374577897858473e-3},
    {2.6178609655925266786e-1, 1.4997715427345868378e+1, -2.4854536981776591192e-1, 1.4461786348596482423e-2, -2.4834536934764890073e-1, 2.2747911940916619424e-2},
    {0.0, 1.5e+1, -3.2274256150543203764e-1, 2.2343749666901058364e-2, -3.2217667046492019401e-1, 3.3102377512562860764e-2},
    {6.9813134635928378313e-2, -3.9999939076531511262e+1, -1.8446988664925486983e-1, 1.0963708997740064447e-2, -1.8462532867080892353e-1, 8.6593434747936600406e-3},
    {2.0e+1, -3.4641016151377549193e+1, -3.355550647093436132e-10, -2.3175111068845390245e-10, -3.3517163547239172614e-10, -2.3681797260264625335e-10},
    {3.4641016151377549193e+1, -2.0e+1, 2.8441226586903626215e-17, 1.7614579326014538554e-16, 2.7658675666035759677e-17, 1.7822163997745922769e-16},
    {4.0e+1, 0.0, 8.3928611000995670337e-19, 0.0, 8.4971319548610386508e-19, 0.0},
    {3.7587704831436333563e+1, 1.3680805733026749849e+1, 2.6146796407624470536e-18, -8.9954383789637182382e-18, 2.6072175103981002289e-18, -9.1116218717838108553e-18},
    {2.8284271247461902021e+1, 2.8284271247461902021e+1, -9.4748116490994182271e-14, 4.0110813994007473088e-14, -9.523400105464793879e-14, 4.1295485763669813599e-14},
    {1.0352761804100831355e+1, 3.86370330515627316e+1, -1.1764928585896897931e-7, -6.3159932125123638536e-6, -1.9404244568502351428e-7, -6.3354295876995443307e-6},
    {6.9809625749134052164e-1, 3.9993907806255649007e+1, -9.832046303922195363e-2, -7.214617880769649213e-3, -9.8439706592391996039e-2, -5.9883941329318593706e-3},
    {0.0, 4.0e+1, -1.9782046132482642778e-1, -1.1571884669619844363e-2, -1.9798052700884547957e-1, -9.1004176637550132417e-3},
};
