"""Printed reference values the package is checked against."""

A_ROWS_7 = [
    [1],
    [1, 2],
    [1, 6, 11],
    [2, 21, 84, 131],
    [6, 92, 588, 1908, 2666],
    [24, 490, 4380, 22020, 62860, 81534],
    [120, 3084, 35790, 246480, 1075020, 2823180, 3478014],
    [720, 22428, 322224, 2838570, 16775640, 66811920, 165838848, 196993194],
]

B_ROWS_7 = [
    [1, 1],
    [1, 4, 5],
    [2, 15, 42, 47],
    [6, 68, 312, 732, 758],
    [24, 370, 2420, 8880, 18820, 18674],
    [120, 2364, 20370, 103320, 335580, 673140, 654834],
    [720, 17388, 187656, 1227450, 5421360, 16485000, 32215008, 31154346],
]

A_SEQUENCE_10 = [1, 5, 25, 137, 841, 5825, 45529, 399713, 3911785, 42302225]

C_TABLE = {
    1: "2", 2: "2.73205", 3: "3.20701", 4: "3.56383", 5: "3.86841",
    6: "4.15213", 7: "4.43119", 8: "4.71412", 9: "5.00517", 10: "5.30597",
    11: "5.61664", 12: "5.93649", 13: "6.26449", 14: "6.59947", 15: "6.94035",
    20: "8.70335", 30: "12.34925", 40: "16.03475", 50: "19.72833", 60: "23.42351",
}

D_TABLE = {
    1: "1.03922", 2: "2.38568", 3: "3.33232", 4: "3.92171", 5: "4.28707",
    6: "4.54145", 7: "4.75734", 8: "4.97336", 9: "5.20626", 10: "5.46090",
    11: "5.73661", 12: "6.03061", 13: "6.33969", 14: "6.66091", 15: "6.99175",
    20: "8.73298", 30: "12.37349", 40: "16.05983", 50: "19.75448", 60: "23.45053",
}

X_TABLE = {
    1: "7.38906", 2: "7.38906", 3: "7.38906", 4: "8.29874", 5: "9.77283",
    6: "10.81135", 7: "11.70187", 8: "12.60164", 9: "13.58167", 10: "14.66667",
    11: "16.00000", 12: "17.33333", 13: "18.66667", 14: "20.00000", 15: "21.42740",
    20: "29.57923", 30: "47.86556", 40: "67.69154", 50: "88.57644", 60: "110.29065",
}

Z_TABLE = {
    2: "1.5", 3: "2.3395", 4: "3.3114", 5: "4.3237", 6: "5.3514",
    7: "6.3851", 8: "7.4208", 9: "8.4566", 10: "9.4914", 11: "10.5251",
}

Z_PRIME_TABLE = {2: 32, 3: 49.5, 4: 82, 5: 155, 6: 113, 7: 143, 8: 187, 9: 251, 10: 353, 11: 528}

M_TABLE = {
    2: "1", 3: "0.5", 4: "0.333333", 5: "0.250636", 6: "0.526887",
    7: "1.300565", 8: "3.719653", 9: "12.070813", 10: "43.788782",
}

ODD_ROOTS = {
    1: "2", 3: "4.23415", 5: "5.83131", 7: "7.43591", 9: "9.07979", 11: "10.6881",
    13: "12.2538", 15: "13.7876", 17: "15.2977", 19: "16.79", 21: "18.2683", 23: "19.7353",
}

ROOT_PAIRS = {
    8: ("6.4306", "8.2185"), 10: ("7.16158", "9.88528"), 12: ("7.90293", "11.4752"),
    14: ("8.63359", "13.0241"), 16: ("9.3507", "14.5452"), 18: ("10.055", "16.0458"),
    20: ("10.7478", "17.5307"), 22: ("11.4307", "19.003"),
}

# significant digits, read off the grouped displays
S3_DIGITS = "2875271863902974796814239935057892940200587915"
ALI_R3_DIGITS = "28752718639024952151614800147324541439731"
UPPER_R3_DIGITS = "2875271863902756978083905505640300828637011482"
Y0 = "4.254946453"
R3_THRESHOLD = "3.95702224148845656e30"

ALI_1E100_ERROR = "40.94738"
