#!/usr/bin/env python3
"""Regenerate the raw fixture CSVs.

Rows follow the upstream global time-series layout (Province/State,
Country/Region, Lat, Long, then one m/d/yy column per day from 1/22/20 to
3/31/20). Place names and coordinates follow the upstream row list; daily
counts are synthetic, drawn from a seeded generator, and must not be read as
real case data.
"""
import csv
import datetime
import math
import random
import sys
from pathlib import Path

ROWS = [
    ("", "Afghanistan", "33.0", "65.0"), ("", "Albania", "41.1533", "20.1683"),
    ("", "Algeria", "28.0339", "1.6596"), ("", "Andorra", "42.5063", "1.5218"),
    ("", "Angola", "-11.2027", "17.8739"), ("", "Antigua and Barbuda", "17.0608", "-61.7964"),
    ("", "Argentina", "-38.4161", "-63.6167"), ("", "Armenia", "40.0691", "45.0382"),
    ("Australian Capital Territory", "Australia", "-35.4735", "149.0124"),
    ("New South Wales", "Australia", "-33.8688", "151.2093"),
    ("Northern Territory", "Australia", "-12.4634", "130.8456"),
    ("Queensland", "Australia", "-28.0167", "153.4"),
    ("South Australia", "Australia", "-34.9285", "138.6007"),
    ("Tasmania", "Australia", "-41.4545", "145.9707"),
    ("Victoria", "Australia", "-37.8136", "144.9631"),
    ("Western Australia", "Australia", "-31.9505", "115.8605"),
    ("", "Austria", "47.5162", "14.5501"), ("", "Azerbaijan", "40.1431", "47.5769"),
    ("", "Bahamas", "25.0343", "-77.3963"), ("", "Bahrain", "26.0275", "50.55"),
    ("", "Bangladesh", "23.685", "90.3563"), ("", "Barbados", "13.1939", "-59.5432"),
    ("", "Belarus", "53.7098", "27.9534"), ("", "Belgium", "50.8333", "4.0"),
    ("", "Benin", "9.3077", "2.3158"), ("", "Bhutan", "27.5142", "90.4336"),
    ("", "Bolivia", "-16.2902", "-63.5887"), ("", "Bosnia and Herzegovina", "43.9159", "17.6791"),
    ("", "Brazil", "-14.235", "-51.9253"), ("", "Brunei", "4.5353", "114.7277"),
    ("", "Bulgaria", "42.7339", "25.4858"), ("", "Burkina Faso", "12.2383", "-1.5616"),
    ("", "Cabo Verde", "16.5388", "-23.0418"), ("", "Cambodia", "11.55", "104.9167"),
    ("", "Cameroon", "3.848", "11.5021"),
    ("Alberta", "Canada", "53.9333", "-116.5765"),
    ("British Columbia", "Canada", "49.2827", "-123.1207"),
    ("Grand Princess", "Canada", "37.6489", "-122.6655"),
    ("Manitoba", "Canada", "53.7609", "-98.8139"),
    ("New Brunswick", "Canada", "46.5653", "-66.4619"),
    ("Newfoundland and Labrador", "Canada", "53.1355", "-57.6604"),
    ("Nova Scotia", "Canada", "44.682", "-63.7443"),
    ("Ontario", "Canada", "51.2538", "-85.3232"),
    ("Prince Edward Island", "Canada", "46.5107", "-63.4168"),
    ("Quebec", "Canada", "52.9399", "-73.5491"),
    ("Saskatchewan", "Canada", "52.9399", "-106.4509"),
    ("Diamond Princess", "Canada", "0", "0"),
    ("Recovered", "Canada", "0", "0"),
    ("", "Central African Republic", "6.6111", "20.9394"), ("", "Chad", "15.4542", "18.7322"),
    ("", "Chile", "-35.6751", "-71.543"),
    ("Anhui", "China", "31.8257", "117.2264"), ("Beijing", "China", "40.1824", "116.4142"),
    ("Chongqing", "China", "30.0572", "107.874"), ("Fujian", "China", "26.0789", "117.9874"),
    ("Gansu", "China", "36.0611", "103.8343"), ("Guangdong", "China", "23.3417", "113.4244"),
    ("Guangxi", "China", "23.8298", "108.7881"), ("Guizhou", "China", "26.8154", "106.8748"),
    ("Hainan", "China", "19.1959", "109.7453"), ("Hebei", "China", "39.549", "116.1306"),
    ("Heilongjiang", "China", "47.862", "127.7615"), ("Henan", "China", "33.882", "113.614"),
    ("Hong Kong", "China", "22.3", "114.2"), ("Hubei", "China", "30.9756", "112.2707"),
    ("Hunan", "China", "27.6104", "111.7088"), ("Inner Mongolia", "China", "44.0935", "113.9448"),
    ("Jiangsu", "China", "32.9711", "119.455"), ("Jiangxi", "China", "27.614", "115.7221"),
    ("Jilin", "China", "43.6661", "126.1923"), ("Liaoning", "China", "41.2956", "122.6085"),
    ("Macau", "China", "22.1667", "113.55"), ("Ningxia", "China", "37.2692", "106.1655"),
    ("Qinghai", "China", "35.7452", "95.9956"), ("Shaanxi", "China", "35.1917", "108.8701"),
    ("Shandong", "China", "36.3427", "118.1498"), ("Shanghai", "China", "31.202", "121.4491"),
    ("Shanxi", "China", "37.5777", "112.2922"), ("Sichuan", "China", "30.6171", "102.7103"),
    ("Tianjin", "China", "39.3054", "117.323"), ("Tibet", "China", "31.6927", "88.0924"),
    ("Xinjiang", "China", "41.1129", "85.2401"), ("Yunnan", "China", "24.974", "101.487"),
    ("Zhejiang", "China", "29.1832", "120.0934"),
    ("", "Colombia", "4.5709", "-74.2973"), ("", "Congo (Brazzaville)", "-4.0383", "21.7587"),
    ("", "Congo (Kinshasa)", "-4.0383", "21.7587"), ("", "Costa Rica", "9.7489", "-83.7534"),
    ("", "Cote d'Ivoire", "7.54", "-5.5471"), ("", "Croatia", "45.1", "15.2"),
    ("", "Diamond Princess", "0", "0"), ("", "Cuba", "22.0", "-80.0"),
    ("", "Cyprus", "35.1264", "33.4299"), ("", "Czechia", "49.8175", "15.473"),
    ("Faroe Islands", "Denmark", "61.8926", "-6.9118"),
    ("Greenland", "Denmark", "71.7069", "-42.6043"),
    ("", "Denmark", "56.2639", "9.5018"), ("", "Djibouti", "11.8251", "42.5903"),
    ("", "Dominican Republic", "18.7357", "-70.1627"), ("", "Ecuador", "-1.8312", "-78.1834"),
    ("", "Egypt", "26.0", "30.0"), ("", "El Salvador", "13.7942", "-88.8965"),
    ("", "Equatorial Guinea", "1.5", "10.0"), ("", "Eritrea", "15.1794", "39.7823"),
    ("", "Estonia", "58.5953", "25.0136"), ("", "Eswatini", "-26.5225", "31.4659"),
    ("", "Ethiopia", "9.145", "40.4897"), ("", "Fiji", "-17.7134", "178.065"),
    ("", "Finland", "64.0", "26.0"),
    ("French Guiana", "France", "3.9339", "-53.1258"),
    ("French Polynesia", "France", "-17.6797", "149.4068"),
    ("Guadeloupe", "France", "16.25", "-61.5833"),
    ("Mayotte", "France", "-12.8275", "45.1662"),
    ("New Caledonia", "France", "-20.9043", "165.618"),
    ("Reunion", "France", "-21.1351", "55.2471"),
    ("Saint Barthelemy", "France", "17.9", "-62.8333"),
    ("St Martin", "France", "18.0708", "-63.0501"),
    ("Martinique", "France", "14.6415", "-61.0242"),
    ("", "France", "46.2276", "2.2137"),
    ("", "Gabon", "-0.8037", "11.6094"), ("", "Gambia", "13.4432", "-15.3101"),
    ("", "Georgia", "42.3154", "43.3569"), ("", "Germany", "51.0", "9.0"),
    ("", "Ghana", "7.9465", "-1.0232"), ("", "Greece", "39.0742", "21.8243"),
    ("", "Guatemala", "15.7835", "-90.2308"), ("", "Guinea", "9.9456", "-9.6966"),
    ("", "Guyana", "5.0", "-58.75"), ("", "Haiti", "18.9712", "-72.2852"),
    ("", "Holy See", "41.9029", "12.4534"), ("", "Honduras", "15.2", "-86.2419"),
    ("", "Hungary", "47.1625", "19.5033"), ("", "Iceland", "64.9631", "-19.0208"),
    ("", "India", "21.0", "78.0"), ("", "Indonesia", "-0.7893", "113.9213"),
    ("", "Iran", "32.0", "53.0"), ("", "Iraq", "33.0", "44.0"),
    ("", "Ireland", "53.1424", "-7.6921"), ("", "Israel", "31.0", "35.0"),
    ("", "Italy", "43.0", "12.0"), ("", "Jamaica", "18.1096", "-77.2975"),
    ("", "Japan", "36.0", "138.0"), ("", "Jordan", "31.24", "36.51"),
    ("", "Kazakhstan", "48.0196", "66.9237"), ("", "Kenya", "-0.0236", "37.9062"),
    ("", "Korea, South", "36.0", "128.0"), ("", "Kuwait", "29.5", "47.75"),
    ("", "Kyrgyzstan", "41.2044", "74.7661"), ("", "Latvia", "56.8796", "24.6032"),
    ("", "Lebanon", "33.8547", "35.8623"), ("", "Liberia", "6.4281", "-9.4295"),
    ("", "Liechtenstein", "47.14", "9.55"), ("", "Lithuania", "55.1694", "23.8813"),
    ("", "Luxembourg", "49.8153", "6.1296"), ("", "Madagascar", "-18.7669", "46.8691"),
    ("", "Malaysia", "2.5", "112.5"), ("", "Maldives", "3.2028", "73.2207"),
    ("", "Malta", "35.9375", "14.3754"), ("", "Mauritania", "21.0079", "10.9408"),
    ("", "Mauritius", "-20.2", "57.5"), ("", "Mexico", "23.6345", "-102.5528"),
    ("", "Moldova", "47.4116", "28.3699"), ("", "Monaco", "43.7333", "7.4167"),
    ("", "Mongolia", "46.8625", "103.8467"), ("", "Montenegro", "42.5", "19.3"),
    ("", "Morocco", "31.7917", "-7.0926"), ("", "Namibia", "-22.9576", "18.4904"),
    ("", "Nepal", "28.1667", "84.25"),
    ("Aruba", "Netherlands", "12.5186", "-70.0358"),
    ("Curacao", "Netherlands", "12.1696", "-68.99"),
    ("Sint Maarten", "Netherlands", "18.0425", "-63.0548"),
    ("Bonaire, Sint Eustatius and Saba", "Netherlands", "12.1784", "-68.2385"),
    ("", "Netherlands", "52.1326", "5.2913"),
    ("", "New Zealand", "-40.9006", "174.886"), ("", "Nicaragua", "12.8654", "-85.2072"),
    ("", "Niger", "17.6078", "8.0817"), ("", "Nigeria", "9.082", "8.6753"),
    ("", "North Macedonia", "41.6086", "21.7453"), ("", "Norway", "60.472", "8.4689"),
    ("", "Oman", "21.0", "57.0"), ("", "Pakistan", "30.3753", "69.3451"),
    ("", "Panama", "8.538", "-80.7821"), ("", "Papua New Guinea", "-6.315", "143.9555"),
    ("", "Paraguay", "-23.4425", "-58.4438"), ("", "Peru", "-9.19", "-75.0152"),
    ("", "Philippines", "13.0", "122.0"), ("", "Poland", "51.9194", "19.1451"),
    ("", "Portugal", "39.3999", "-8.2245"), ("", "Qatar", "25.3548", "51.1839"),
    ("", "Romania", "45.9432", "24.9668"), ("", "Russia", "60.0", "90.0"),
    ("", "Rwanda", "-1.9403", "29.8739"), ("", "Saint Lucia", "13.9094", "-60.9789"),
    ("", "Saint Vincent and the Grenadines", "12.9843", "-61.2872"),
    ("", "San Marino", "43.9424", "12.4578"), ("", "Saudi Arabia", "24.0", "45.0"),
    ("", "Senegal", "14.4974", "-14.4524"), ("", "Serbia", "44.0165", "21.0059"),
    ("", "Seychelles", "-4.6796", "55.492"), ("", "Singapore", "1.2833", "103.8333"),
    ("", "Slovakia", "48.669", "19.699"), ("", "Slovenia", "46.1512", "14.9955"),
    ("", "Somalia", "5.1521", "46.1996"), ("", "South Africa", "-30.5595", "22.9375"),
    ("", "Spain", "40.0", "-4.0"), ("", "Sri Lanka", "7.0", "81.0"),
    ("", "Sudan", "12.8628", "30.2176"), ("", "Suriname", "3.9193", "-56.0278"),
    ("", "Sweden", "63.0", "16.0"), ("", "Switzerland", "46.8182", "8.2275"),
    ("", "Taiwan*", "23.7", "121.0"), ("", "Tanzania", "-6.369", "34.8888"),
    ("", "Thailand", "15.0", "101.0"), ("", "Togo", "8.6195", "0.8248"),
    ("", "Trinidad and Tobago", "10.6918", "-61.2225"), ("", "Tunisia", "34.0", "9.0"),
    ("", "Turkey", "38.9637", "35.2433"), ("", "Uganda", "1.0", "32.0"),
    ("", "Ukraine", "48.3794", "31.1656"), ("", "United Arab Emirates", "24.0", "54.0"),
    ("Bermuda", "United Kingdom", "32.3078", "-64.7505"),
    ("Cayman Islands", "United Kingdom", "19.3133", "-81.2546"),
    ("Channel Islands", "United Kingdom", "49.3723", "-2.3644"),
    ("Gibraltar", "United Kingdom", "36.1408", "-5.3536"),
    ("Isle of Man", "United Kingdom", "54.2361", "-4.5481"),
    ("Montserrat", "United Kingdom", "16.7425", "-62.1874"),
    ("", "United Kingdom", "55.3781", "-3.436"),
    ("", "Uruguay", "-32.5228", "-55.7658"), ("", "US", "37.0902", "-95.7129"),
    ("", "Uzbekistan", "41.3775", "64.5853"), ("", "Venezuela", "6.4238", "-66.5897"),
    ("", "Vietnam", "16.0", "108.0"), ("", "Zambia", "-15.4167", "28.2833"),
    ("", "Zimbabwe", "-20.0", "30.0"), ("", "Dominica", "15.415", "-61.371"),
    ("", "Grenada", "12.1165", "-61.679"), ("", "Mozambique", "-18.6657", "35.5296"),
    ("", "Syria", "34.8021", "38.9968"), ("", "Timor-Leste", "-8.8742", "125.7275"),
    ("", "Belize", "13.1939", "-59.5432"), ("", "Laos", "19.8563", "102.4955"),
    ("", "Libya", "26.3351", "17.2283"), ("", "West Bank and Gaza", "31.9522", "35.2332"),
    ("", "Guinea-Bissau", "11.8037", "-15.1804"), ("", "Mali", "17.570692", "-3.996166"),
    ("", "Saint Kitts and Nevis", "17.357822", "-62.782998"),
    ("", "Kosovo", "42.602636", "20.902977"), ("", "Burma", "21.9162", "95.956"),
    ("Anguilla", "United Kingdom", "18.2206", "-63.0686"),
    ("British Virgin Islands", "United Kingdom", "18.4207", "-64.64"),
    ("Turks and Caicos Islands", "United Kingdom", "21.694", "-71.7979"),
    ("", "MS Zaandam", "0", "0"), ("", "Yemen", "15.552727", "48.516388"),
]

START = datetime.date(2020, 1, 22)
END = datetime.date(2020, 3, 31)


def dates():
    d = START
    while d <= END:
        yield d
        d += datetime.timedelta(days=1)


def header():
    return ["Province/State", "Country/Region", "Lat", "Long"] + [
        f"{d.month}/{d.day}/{d.year % 100}" for d in dates()
    ]


# (onset index, rate, cap, midpoint offset, fatality ratio, death lag)
PINNED = {
    ("", "Morocco"): (40, 0.22, 3000, 30, 0.06, 6),
    ("", "Spain"): (9, 0.3, 160000, 60, 0.09, 5),
    ("", "France"): (2, 0.28, 90000, 66, 0.07, 6),
    ("", "Germany"): (5, 0.3, 120000, 62, 0.01, 8),
    ("British Columbia", "Canada"): (6, 0.2, 2500, 60, 0.03, 7),
}


def curves(rng, days, pinned=None):
    """Cumulative confirmed and deaths series for one row."""
    if pinned is None and rng.random() < 0.08:
        return [0] * days, [0] * days
    onset = rng.randrange(0, days)
    rate = rng.uniform(0.1, 0.35)
    cap = rng.choice([5, 40, 300, 2500, 20000, 90000])
    mid = onset + rng.uniform(15, 45)
    confirmed, deaths = [], []
    cfr = rng.uniform(0.0, 0.08)
    lag = rng.randrange(3, 15)
    if pinned is not None:
        onset, rate, cap, offset, cfr, lag = pinned
        mid = onset + offset
    for i in range(days):
        if i < onset:
            confirmed.append(0)
        else:
            confirmed.append(int(cap / (1 + math.exp(-rate * (i - mid)))) + 1)
        j = i - lag
        deaths.append(int(confirmed[j] * cfr) if j >= 0 else 0)
    # keep the series cumulative
    for series in (confirmed, deaths):
        for i in range(1, days):
            series[i] = max(series[i], series[i - 1])
    return confirmed, deaths


def main(out_dir):
    out = Path(out_dir)
    rng = random.Random(20200331)
    days = len(list(dates()))
    rows_c, rows_d = [], []
    for prov, country, lat, lon in ROWS:
        c, d = curves(rng, days, PINNED.get((prov, country)))
        rows_c.append([prov, country, lat, lon] + [str(v) for v in c])
        rows_d.append([prov, country, lat, lon] + [str(v) for v in d])
    # a reporting correction back to zero and one blank cell
    for row in rows_c:
        if row[1] == "Cabo Verde":
            row[4 + 60:4 + 63] = ["1", "0", "0"]
        if row[1] == "Nepal":
            row[4 + 40] = ""
    for name, rows in (("confirmed", rows_c), ("deaths", rows_d)):
        path = out / f"time_series_covid19_{name}_global.csv"
        with path.open("w", newline="") as f:
            w = csv.writer(f, lineterminator="\n")
            w.writerow(header())
            w.writerows(rows)


if __name__ == "__main__":
    main(sys.argv[1] if len(sys.argv) > 1 else Path(__file__).resolve().parents[1] / "raw")
