#include "fmeval/prompts.hpp"

#include "fmeval/digest.hpp"

namespace fmeval {
namespace {

constexpr std::string_view kExtraction =
    R"(What is the background/method/result/conclusion of this work?
Extract the segment of the input as the answer.
Return the answer in JSON format, where the key is background/method/result/conclusion.
If any category is not represented in the input, its value should be left empty.)";

constexpr std::string_view kZeroShotBC =
    R"(Assess the alignment (1-3) between the two inputs.

- 3: Input2 is generally consistent with Input1.
- 2: Input1 is not mentioned in Input2.
- 1: Input2 contradicts Input1, or Input2 lacks relevant content in this aspect.
Only return the number.)";

constexpr std::string_view kZeroShotMR =
    R"(Assess the alignment (1-4) between the two inputs.

- 4: Input2 generally includes Input1's information, or omits minor details from Input1.
- 3: Input2 generally includes Input1's information, but omits a part of the key information from Input1.
- 2: Input2 is not empty, but it does not mention any key information in Input1.
- 1: Input2 contradicts Input1, or Input2 lacks relevant content in this aspect.
Only return the number.)";

constexpr std::string_view kFewShotBC =
    R"(Using a less strict criterion, assess the alignment (1-3) between the two inputs.

- 3: Input2 is generally consistent with Input1.
- 2: Input1 is not mentioned in Input2.
- 1: Input2 contradicts Input1.
Only return the number.

Example 1:
Input1: The use of 2-[18f]fluoro-2-deoxy-d-glucose ([18f]FDG) may help to establish the antitumor activity of enzastaurin, a novel protein kinase C-beta II (PKC-II) inhibitor, in mouse xenografts.
Input2: Imaging techniques, such as positron emission tomography (PET), are important for diagnosing and monitoring cancer patients. The glucose analogue 2-[F]fluoro-2-deoxy-D-glucose (FDG) is commonly used as a tracer in PET imaging to assess tissue glucose utilization. FDG PET is widely used in diagnosing various types of cancer, and it is being evaluated as a tool to assess the effects of anticancer drugs. Enzastaurin is a novel compound that inhibits protein kinase C-beta (PKC-II), which has been implicated in tumor growth.
Number: 3

Example 2:
Input1: Nissen fundoplication is an effective treatment for gastroesophageal reflux in infants. Laparoscopic procedures after previous laparotomy are technically more challenging. The role of laparoscopic Nissen fundoplication after neonatal laparotomy for diseases unrelated to reflux is poorly described.
Input2: The article discusses the complex nature of gastroesophageal reflux in neonates and infants, which is often caused by a combination of developmental and anatomical factors.
Number: 2

Example 3:
Input1: [18f]FDG PET imaging technique does not correlate with standard caliper assessments in xenografts to assess the antitumor activity of enzastaurin.
Input2: These findings suggest that [18F]FDG PET imaging is a useful tool for assessing the antitumor effects of novel compounds, such as enzastaurin, in preclinical studies.
Number: 1)";

constexpr std::string_view kFewShotMR =
    R"(Assess the alignment (1-4) between the two inputs.

- 4: Input2 generally covers the information present in Input1, or omits minor details from Input1.
- 3: Input2 omits important information from Input1.
- 2: Input1 is not mentioned in Input2.
- 1: Input2 contradicts Input1.
Only return the number.

Example 1:
Input1: We analyzed the methylation status of protocadherin8 in 162 prostate cancer tissues and 47 benign prostatic hyperplasia tissues using methylation-specific PCR (MSP). The patients with prostate cancer were followed up for 15-60 months, and biochemical recurrence was defined as the period between radical prostatectomy and the measurement of 2 successive values of serum PSA level 0.2 ng/ml.
Input2: The promoter methylation status of protocadherin8 in 162 prostate cancer tissues and 47 normal prostate tissues was examined using methylation-specific pcr (msp). subsequently, the relationships between protocadherin8 methylation and clinicopathological features of prostate cancer patients and biochemical recurrence-free survival of patients were analyzed.
Number: 4

Example 2:
Input1: The present study included 515 patients admitted to the coronary care units or equivalent cardiology wards of the participating hospitals between 2011 and 2012 in north punjab, pakistan. the analysis was focused on identifying the socioeconomic status, lifestyle, family history of mi, and risk factors (i.e. hypertension, diabetes, smoking, and hyperlipidemia). a structured questionnaire was designed to collect data. the lipid profile was recorded from the investigation chart of every patient. for statistical analysis, the kruskal wallis, mann-whitney u, wilcoxon, and chi-square tests were used.
Input2: A population-based cross-sectional study was conducted in six regions in north punjab (urban and rural patients). data were collected using trained staff from the patients admitted in coronary care units or equivalent cardiology hospitals in the participating hospitals.
Number: 3

Example 3:
Input1: Hyperglycemia, commencing on the first dose of the steroid given, persisted even after the discontinuation of steroids and improvement of other signs. there were no signs of pancreatitis or type 1 diabetes clinically in laboratory tests. her blood glucose levels were regulated at first with insulin and later with metformin. within 1 year of follow-up, still regulated with oral antidiabetics, she has been diagnosed with type 2 diabetes.
Input2: The patient was treated with discontinuation of carbamazepine, antihistaminic and systemic steroids, and her hyperglycemia resolved with metformin treatment. The patient's lung, skin, liver, and renal findings regressed, and a patch test with carbamazepine was positive.
Number: 2

Example 4:
Input1: Hyperglycemia, commencing on the first dose of the steroid given, persisted even after the discontinuation of steroids and improvement of other signs. there were no signs of pancreatitis or type 1 diabetes clinically in laboratory tests. within 1 year of follow-up, still regulated with oral antidiabetics, she has been diagnosed with type 2 diabetes.
Input2: The patient recovered without any sequelae.
Number: 1)";

}  // namespace

std::string_view shot_mode_name(ShotMode mode) {
  return mode == ShotMode::zero_shot ? "zero_shot" : "few_shot";
}

std::string_view extraction_instructions() { return kExtraction; }

std::string_view comparison_instructions(FacetKind kind, ShotMode mode) {
  const bool coarse = facet_scale(kind) == 3;
  if (mode == ShotMode::zero_shot) return coarse ? kZeroShotBC : kZeroShotMR;
  return coarse ? kFewShotBC : kFewShotMR;
}

std::map<std::string, std::string> prompt_digests() {
  return {
      {"extraction", sha256_hex(kExtraction)},
      {"compare_bc_zero_shot", sha256_hex(kZeroShotBC)},
      {"compare_mr_zero_shot", sha256_hex(kZeroShotMR)},
      {"compare_bc_few_shot", sha256_hex(kFewShotBC)},
      {"compare_mr_few_shot", sha256_hex(kFewShotMR)},
  };
}

}  // namespace fmeval
